#pragma once

#include "specband/error.hpp"
#include "specband/linalg.hpp"
#include "specband/matrix.hpp"
#include "specband/polynomial.hpp"
#include "specband/scalar.hpp"
