#ifndef TRPAPR_TRPAPR_HPP
#define TRPAPR_TRPAPR_HPP

#include "trpapr/config.hpp"
#include "trpapr/error.hpp"
#include "trpapr/experiment.hpp"
#include "trpapr/fft.hpp"
#include "trpapr/parallel.hpp"
#include "trpapr/pgd.hpp"
#include "trpapr/qcqp.hpp"
#include "trpapr/random.hpp"
#include "trpapr/sensing.hpp"
#include "trpapr/signal.hpp"
#include "trpapr/table.hpp"
#include "trpapr/tone_plan.hpp"

#endif  // TRPAPR_TRPAPR_HPP
