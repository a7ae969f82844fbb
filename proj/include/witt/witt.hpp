#pragma once

#include "witt/exactnum.hpp"
#include "witt/poly.hpp"
#include "witt/algebra.hpp"
#include "witt/catalog.hpp"
#include "witt/linalg.hpp"
#include "witt/halfderiv.hpp"
#include "witt/tps.hpp"
#include "witt/dsl.hpp"
