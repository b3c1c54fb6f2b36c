#include "pilgrim/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pilgrim {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_ledger_csv(std::ostream& os, const HotelLedger& ledger) {
  if (!ledger.keeps_records()) throw std::invalid_argument("ledger was built without pilgrim records");
  os << "pilgrim,time,hotel_index,funds,toll_paid,tax_paid,forfeit\n";
  for (const auto& r : ledger.records()) {
    os << r.pilgrim << ',' << format_double(r.time) << ',' << r.hotel << ',' << format_double(r.funds) << ','
       << format_double(r.toll_paid) << ',' << format_double(r.tax_paid) << ',' << format_double(r.forfeit) << '\n';
  }
}

nlohmann::json ledger_json(const HotelLedger& ledger) {
  nlohmann::json j;
  const auto& p = ledger.params();
  j["params"] = {{"rho", p.rho()}, {"beta", p.beta()}, {"nu", p.nu()}};
  j["pilgrims"] = ledger.pilgrims();
  j["hotels"] = nlohmann::json::array();
  for (const auto& h : ledger.hotels()) {
    j["hotels"].push_back({{"position", h.position},
                           {"occupancy", h.occupancy},
                           {"founder", h.founder},
                           {"founding", h.founding},
                           {"taxes", h.taxes},
                           {"forfeits", h.forfeits}});
  }
  j["records"] = nlohmann::json::array();
  for (const auto& r : ledger.records()) {
    j["records"].push_back({{"pilgrim", r.pilgrim},
                            {"time", r.time},
                            {"hotel_index", r.hotel},
                            {"funds", r.funds},
                            {"toll_paid", r.toll_paid},
                            {"tax_paid", r.tax_paid},
                            {"forfeit", r.forfeit},
                            {"founded", r.founded}});
  }
  j["tolls"] = ledger.tolls_paid();
  j["taxes_and_forfeits"] = ledger.taxes_and_forfeits();
  return j;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto cut = line.find(',', pos);
    std::string f = line.substr(pos, cut == std::string::npos ? std::string::npos : cut - pos);
    const auto b = f.find_first_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, f.find_last_not_of(" \t") - b + 1);
    fields.push_back(std::move(f));
    if (cut == std::string::npos) break;
    pos = cut + 1;
  }
  return fields;
}

}  // namespace

std::vector<double> read_times(std::istream& is) {
  std::vector<double> out;
  std::string line;
  long lineno = 0;
  std::size_t column = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (column >= fields.size()) {
      if (fields.size() == 1 && fields.front().empty()) continue;
      throw std::invalid_argument("missing time column on line " + std::to_string(lineno));
    }
    const std::string& field = fields[column];
    if (field.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      if (lineno == 1 && out.empty()) {
        // header: prefer a column named "time"
        const auto it = std::find(fields.begin(), fields.end(), "time");
        if (it != fields.end()) column = static_cast<std::size_t>(it - fields.begin());
        continue;
      }
      throw std::invalid_argument("bad time on line " + std::to_string(lineno) + ": " + field);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> read_times_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_times(in);
}

void write_incidence_csv(std::ostream& os, const IncidenceMatrix& z) {
  const std::size_t k = z.empty() ? 0 : z.front().size();
  os << "pilgrim";
  for (std::size_t c = 0; c < k; ++c) os << ",f" << c + 1;
  os << '\n';
  for (std::size_t i = 0; i < z.size(); ++i) {
    os << i + 1;
    for (std::size_t c = 0; c < k; ++c) os << ',' << (z[i][c] ? 1 : 0);
    os << '\n';
  }
}

nlohmann::json allocation_json(const FeatureAllocation& a) {
  nlohmann::json j;
  j["n"] = a.n();
  j["features"] = nlohmann::json::array();
  for (const auto& f : a.features()) {
    nlohmann::json fj = {{"members", f.members}, {"founder", f.founder}};
    if (f.position) fj["position"] = *f.position;
    j["features"].push_back(fj);
  }
  return j;
}

nlohmann::json partition_json(const OrderedPartition& a) {
  return {{"n", a.n()}, {"ordered", true}, {"blocks", a.blocks()}};
}

nlohmann::json partition_json(const Partition& b) {
  return {{"n", b.n()}, {"ordered", false}, {"blocks", b.blocks()}, {"text", b.to_string()}};
}

}  // namespace pilgrim
