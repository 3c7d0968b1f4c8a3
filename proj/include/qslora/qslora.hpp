#pragma once

#include "qslora/channel.hpp"
#include "qslora/chip_waveform.hpp"
#include "qslora/cli.hpp"
#include "qslora/ct_oracle.hpp"
#include "qslora/errors.hpp"
#include "qslora/fscm.hpp"
#include "qslora/monte_carlo.hpp"
#include "qslora/quadrature.hpp"
#include "qslora/random.hpp"
#include "qslora/receiver.hpp"
#include "qslora/results_io.hpp"
#include "qslora/ser_theory.hpp"
#include "qslora/sweep.hpp"
#include "qslora/symbol_correlations.hpp"
