#ifndef EPPOOL_ENSEMBLE_IO_HPP
#define EPPOOL_ENSEMBLE_IO_HPP

#include <string>

#include "eppool/imis.hpp"

namespace eppool {

// Ensemble CSV: t0,t1,log_r0,beta0,beta1,beta2,beta3,beta4,log_weight,loglik,sampler_logdensity
// This file is the contract consumed by the pool command.

void write_ensemble_csv(const std::string& path, const WeightedEnsemble& ens);
WeightedEnsemble read_ensemble_csv(const std::string& path);

void write_diagnostics_json(const std::string& path, const ImisDiagnostics& diag);

}  // namespace eppool

#endif
