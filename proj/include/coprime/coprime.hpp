#pragma once

#include "coprime/arith.hpp"
#include "coprime/asymptotics.hpp"
#include "coprime/bigfloat.hpp"
#include "coprime/errors.hpp"
#include "coprime/explorer.hpp"
#include "coprime/oracle.hpp"
#include "coprime/rho.hpp"
