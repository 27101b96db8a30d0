#ifndef MTLSMC_HPP
#define MTLSMC_HPP

#include "mtlsmc/error.hpp"
#include "mtlsmc/timeset.hpp"
#include "mtlsmc/formula.hpp"
#include "mtlsmc/parser.hpp"
#include "mtlsmc/atoms.hpp"
#include "mtlsmc/trace.hpp"
#include "mtlsmc/csem.hpp"
#include "mtlsmc/dsem.hpp"
#include "mtlsmc/stochastic.hpp"
#include "mtlsmc/harness.hpp"
#include "mtlsmc/experiments.hpp"

#endif  // MTLSMC_HPP
