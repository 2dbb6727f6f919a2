#pragma once

#include "qmono/errors.hpp"
#include "qmono/qcore.hpp"
#include "qmono/entropies.hpp"
#include "qmono/measures.hpp"
#include "qmono/optimize.hpp"
#include "qmono/gbound.hpp"
#include "qmono/convexroof.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/harness.hpp"
