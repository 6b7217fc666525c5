#pragma once

#include "kharper/classical.hpp"
#include "kharper/error.hpp"
#include "kharper/floquet.hpp"
#include "kharper/lattice.hpp"
#include "kharper/parallel.hpp"
#include "kharper/phasespace.hpp"
#include "kharper/representation.hpp"
#include "kharper/spectral.hpp"

