#pragma once

#include "hypergeom/error.hpp"
#include "hypergeom/scalar.hpp"
#include "hypergeom/number_theory.hpp"
#include "hypergeom/matrix.hpp"
#include "hypergeom/modular.hpp"
#include "hypergeom/polynomial.hpp"
#include "hypergeom/construct.hpp"
#include "hypergeom/form.hpp"
#include "hypergeom/density.hpp"
#include "hypergeom/congruence.hpp"
#include "hypergeom/zpoints.hpp"
#include "hypergeom/words.hpp"
#include "hypergeom/pipeline.hpp"
