#pragma once

#include "forkrep/betweenness.hpp"
#include "forkrep/errors.hpp"
#include "forkrep/json_io.hpp"
#include "forkrep/probability.hpp"
#include "forkrep/rational.hpp"
#include "forkrep/relation.hpp"
#include "forkrep/solver.hpp"
#include "forkrep/synthesizer.hpp"
