#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pilgrim/cladogram.hpp"
#include "pilgrim/monopoly.hpp"
#include "pilgrim/partitions.hpp"
#include "pilgrim/voyage.hpp"

namespace pilgrim {

// Columns pilgrim,time,hotel_index,funds,toll_paid,tax_paid,forfeit. hotel_index is founding order.
void write_ledger_csv(std::ostream& os, const HotelLedger& ledger);
nlohmann::json ledger_json(const HotelLedger& ledger);

// One time per line from the first column, or from the column named "time" when the
// first line is a header. Other columns are ignored.
std::vector<double> read_times(std::istream& is);
std::vector<double> read_times_file(const std::string& path);

void write_incidence_csv(std::ostream& os, const IncidenceMatrix& z);
nlohmann::json allocation_json(const FeatureAllocation& a);

nlohmann::json partition_json(const OrderedPartition& a);
nlohmann::json partition_json(const Partition& b);

// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace pilgrim
