#ifndef EPPOOL_CSV_HPP
#define EPPOOL_CSV_HPP

#include <iosfwd>
#include <string>

#include "eppool/types.hpp"

namespace eppool {

// CSV schemas:
//   ANC:        site,year,prevalence,n
//   NPBS:       year,prevalence,se
//   demography: year,entrants,mu,a50,migration
// initial_population is a sidecar value carried by the run config.

AreaDataset parse_area_dataset(const std::string& anc_csv,
                               const std::string& npbs_csv,
                               const std::string& demog_csv,
                               const std::string& area_id,
                               double initial_population);

AreaDataset load_area_dataset(const std::string& anc_path,
                              const std::string& npbs_path,
                              const std::string& demog_path,
                              const std::string& area_id,
                              double initial_population);

std::string serialize_anc_csv(const std::vector<AncObservation>& anc);
std::string serialize_npbs_csv(const std::vector<NpbsObservation>& npbs);
std::string serialize_demography_csv(const Demography& demog);

}  // namespace eppool

#endif
