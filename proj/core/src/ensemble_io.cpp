#include "eppool/ensemble_io.hpp"

#include <json.hpp>
#include <sstream>

#include "eppool/util.hpp"

namespace eppool {

namespace {
const char* kHeader =
    "t0,t1,log_r0,beta0,beta1,beta2,beta3,beta4,log_weight,loglik,sampler_logdensity";
}

void write_ensemble_csv(const std::string& path, const WeightedEnsemble& ens) {
  std::ostringstream ss;
  ss.precision(17);
  ss << kHeader << '\n';
  for (int i = 0; i < ens.size(); ++i) {
    for (int j = 0; j < ens.dim(); ++j) ss << ens.samples(i, j) << ',';
    ss << ens.log_weights[i] << ',' << ens.loglik[i] << ','
       << ens.sampler_logdensity[i] << '\n';
  }
  atomic_write_file(path, ss.str());
}

WeightedEnsemble read_ensemble_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || split_csv_line(line) != split_csv_line(kHeader))
    throw ParseError(path + ": bad ensemble header");

  std::vector<std::array<double, ParamVector::dim + 3>> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != ParamVector::dim + 3)
      throw ParseError(path + " line " + std::to_string(line_no) +
                       ": expected " + std::to_string(ParamVector::dim + 3) +
                       " fields");
    std::array<double, ParamVector::dim + 3> row{};
    for (std::size_t j = 0; j < fields.size(); ++j) {
      try {
        row[j] = std::stod(fields[j]);
      } catch (const std::exception&) {
        throw ParseError(path + " line " + std::to_string(line_no) +
                         ": bad number '" + fields[j] + "'");
      }
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError(path + ": empty ensemble");

  WeightedEnsemble ens;
  const auto n = static_cast<int>(rows.size());
  ens.samples.resize(n, ParamVector::dim);
  ens.log_weights.resize(n);
  ens.loglik.resize(n);
  ens.sampler_logdensity.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < ParamVector::dim; ++j) ens.samples(i, j) = rows[i][j];
    ens.log_weights[i] = rows[i][ParamVector::dim];
    ens.loglik[i] = rows[i][ParamVector::dim + 1];
    ens.sampler_logdensity[i] = rows[i][ParamVector::dim + 2];
  }
  ens.log_weights.array() -= logsumexp(ens.log_weights);
  ens.diagnostics.n_stored = n;
  return ens;
}

void write_diagnostics_json(const std::string& path, const ImisDiagnostics& diag) {
  nlohmann::json j;
  j["iterations"] = diag.iterations;
  j["max_weight"] = diag.max_weight;
  j["expected_unique_fraction"] = diag.expected_unique_fraction;
  j["n_evaluated"] = diag.n_evaluated;
  j["n_stored"] = diag.n_stored;
  j["ess_history"] = diag.ess_history;
  atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace eppool
