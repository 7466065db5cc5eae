#pragma once

#include "biphoton/constants.hpp"
#include "biphoton/quadrature.hpp"
#include "biphoton/specfun.hpp"
#include "biphoton/acceptor.hpp"
#include "biphoton/source.hpp"
#include "biphoton/tpe.hpp"
#include "biphoton/fft.hpp"
#include "biphoton/oracle.hpp"
#include "biphoton/parallel.hpp"
#include "biphoton/harness.hpp"
