#pragma once

#include "hyperrho/certificates.hpp"
#include "hyperrho/errors.hpp"
#include "hyperrho/family.hpp"
#include "hyperrho/generators.hpp"
#include "hyperrho/hypergraph.hpp"
#include "hyperrho/io.hpp"
#include "hyperrho/ordering.hpp"
#include "hyperrho/perturbations.hpp"
#include "hyperrho/recurrences.hpp"
#include "hyperrho/spectral.hpp"
