// polytower.hpp
// Umbrella header: dynamics of integer polynomial maps on residue
// rings, period certificates, tower-stability, and the base-b digit
// streams of iterated-exponential limits.
#pragma once

#include "arith.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "integer.hpp"
#include "json_io.hpp"
#include "limits.hpp"
#include "periods.hpp"
#include "polynomial.hpp"
#include "stability.hpp"
