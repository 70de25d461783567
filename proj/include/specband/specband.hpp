#pragma once

#include "specband/numerics.hpp"
#include "specband/banded.hpp"
#include "specband/factorization.hpp"
#include "specband/recursion.hpp"
#include "specband/spectral.hpp"
#include "specband/measures.hpp"
#include "specband/quadrature.hpp"
#include "specband/gaussborel.hpp"
