#ifndef POLYDET_POLYDET_HPP
#define POLYDET_POLYDET_HPP

// Umbrella header: secret-shared polynomial-matrix determinants with cost
// metering.  Layers, bottom up: field/poly/series/matrix algebra, Beaver
// ring adaptors, additive sharing, the deterministic multi-party engine,
// interactive protocols, the three determinant methods, preprocessing and
// cost accounting, file formats.

#include "polydet/io.hpp"

#endif
