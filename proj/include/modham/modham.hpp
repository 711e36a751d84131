#pragma once

#include "modham/battery.hpp"
#include "modham/cauchy.hpp"
#include "modham/conformal.hpp"
#include "modham/entropy.hpp"
#include "modham/errors.hpp"
#include "modham/field.hpp"
#include "modham/grid.hpp"
#include "modham/io.hpp"
#include "modham/massive.hpp"
#include "modham/modular.hpp"
#include "modham/oracle.hpp"
#include "modham/transform.hpp"
