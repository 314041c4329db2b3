#include "onsu/metrics.hpp"

#include <cstdio>

#include "onsu/errors.hpp"

namespace onsu {

double acceptance_ratio(int accepted, int arrived) {
    if (accepted < 0 || arrived < 0 || accepted > arrived)
        throw ValidationError("acceptance_ratio: accepted must lie in [0, arrived]");
    if (arrived == 0) return 100.0;  // nothing arrived, nothing rejected
    return 100.0 * static_cast<double>(accepted) / static_cast<double>(arrived);
}

std::string slot_csv_header() {
    return "slot,arrived,accepted,eta,node_power,switch_power,total_power,active_servers,"
           "active_links,admit_wall_time";
}

std::string slot_csv_row(const SlotRecord& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.6f,%.6f,%.6f,%d,%d,%.6f", r.slot, r.arrived,
                  r.accepted, r.eta, r.node_power, r.switch_power, r.total_power,
                  r.active_servers, r.active_links, r.admit_wall_time);
    return buf;
}

} // namespace onsu
