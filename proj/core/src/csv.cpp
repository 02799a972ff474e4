#include "eppool/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "eppool/util.hpp"

namespace eppool {

namespace {

struct CsvReader {
  std::istringstream stream;
  std::string source;
  int line_no = 0;

  CsvReader(const std::string& text, std::string src)
      : stream(text), source(std::move(src)) {}

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(stream, line)) {
      ++line_no;
      if (line.empty() || line == "\r") continue;
      fields = split_csv_line(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source + " line " + std::to_string(line_no) + ": " + what);
  }
};

double parse_double(const CsvReader& r, const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    r.fail(std::string("bad ") + what + " value '" + s + "'");
  }
}

int parse_int(const CsvReader& r, const std::string& s, const char* what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    r.fail(std::string("bad ") + what + " value '" + s + "'");
  return v;
}

void expect_header(CsvReader& r, const std::string& header) {
  std::vector<std::string> fields;
  if (!r.next(fields)) r.fail("missing header '" + header + "'");
  const auto expected = split_csv_line(header);
  if (fields != expected) r.fail("expected header '" + header + "'");
}

}  // namespace

AreaDataset parse_area_dataset(const std::string& anc_csv,
                               const std::string& npbs_csv,
                               const std::string& demog_csv,
                               const std::string& area_id,
                               double initial_population) {
  AreaDataset ds;
  ds.area_id = area_id;

  {
    CsvReader r(anc_csv, area_id + " ANC");
    expect_header(r, "site,year,prevalence,n");
    std::vector<std::string> f;
    while (r.next(f)) {
      if (f.size() != 4) r.fail("expected 4 fields");
      AncObservation o;
      o.site_id = f[0];
      o.year = parse_int(r, f[1], "year");
      o.prevalence = parse_double(r, f[2], "prevalence");
      o.sample_size = parse_int(r, f[3], "n");
      ds.anc.push_back(std::move(o));
    }
  }
  {
    CsvReader r(npbs_csv, area_id + " NPBS");
    expect_header(r, "year,prevalence,se");
    std::vector<std::string> f;
    while (r.next(f)) {
      if (f.size() != 3) r.fail("expected 3 fields");
      NpbsObservation o;
      o.year = parse_int(r, f[0], "year");
      o.prevalence = parse_double(r, f[1], "prevalence");
      o.std_error = parse_double(r, f[2], "se");
      ds.npbs.push_back(o);
    }
  }
  {
    CsvReader r(demog_csv, area_id + " demography");
    expect_header(r, "year,entrants,mu,a50,migration");
    std::vector<std::string> f;
    bool first = true;
    int prev_year = 0;
    Demography& d = ds.demography;
    while (r.next(f)) {
      if (f.size() != 5) r.fail("expected 5 fields");
      const int year = parse_int(r, f[0], "year");
      if (first) {
        d.year_start = year;
        first = false;
      } else if (year != prev_year + 1) {
        r.fail("demography years must be consecutive");
      }
      prev_year = year;
      d.year_end = year;
      d.entrants.push_back(parse_double(r, f[1], "entrants"));
      d.non_aids_mortality.push_back(parse_double(r, f[2], "mu"));
      d.age_out.push_back(parse_double(r, f[3], "a50"));
      d.net_migration.push_back(parse_double(r, f[4], "migration"));
    }
    if (first) r.fail("demography has no rows");
    d.initial_population = initial_population;
  }

  validate(ds);
  return ds;
}

AreaDataset load_area_dataset(const std::string& anc_path,
                              const std::string& npbs_path,
                              const std::string& demog_path,
                              const std::string& area_id,
                              double initial_population) {
  return parse_area_dataset(read_file(anc_path), read_file(npbs_path),
                            read_file(demog_path), area_id, initial_population);
}

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

std::string serialize_anc_csv(const std::vector<AncObservation>& anc) {
  std::string out = "site,year,prevalence,n\n";
  for (const auto& o : anc)
    out += o.site_id + "," + std::to_string(o.year) + "," + fmt(o.prevalence) +
           "," + std::to_string(o.sample_size) + "\n";
  return out;
}

std::string serialize_npbs_csv(const std::vector<NpbsObservation>& npbs) {
  std::string out = "year,prevalence,se\n";
  for (const auto& o : npbs)
    out += std::to_string(o.year) + "," + fmt(o.prevalence) + "," +
           fmt(o.std_error) + "\n";
  return out;
}

std::string serialize_demography_csv(const Demography& d) {
  std::string out = "year,entrants,mu,a50,migration\n";
  for (int i = 0; i < d.n_years(); ++i)
    out += std::to_string(d.year_start + i) + "," + fmt(d.entrants[i]) + "," +
           fmt(d.non_aids_mortality[i]) + "," + fmt(d.age_out[i]) + "," +
           fmt(d.net_migration[i]) + "\n";
  return out;
}

}  // namespace eppool
