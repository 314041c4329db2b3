#ifndef ONSU_METRICS_HPP
#define ONSU_METRICS_HPP

#include <string>
#include <vector>

namespace onsu {

// One row of the per-slot CSV, fields in schema order.
struct SlotRecord {
    int slot = 0;
    int arrived = 0;
    int accepted = 0;
    int eta = 0;
    double node_power = 0.0;    // N_Used + N_c at slot end
    double switch_power = 0.0;  // S_Used + S_c at slot end
    double total_power = 0.0;
    int active_servers = 0;
    int active_links = 0;
    double admit_wall_time = 0.0;  // seconds, admission only
};

// Per-slot protection snapshots, kept outside the pinned CSV schema.
struct ProtectionRecord {
    double node_cpu = 0.0;   // sum over nodes and ledger slots of O^t_n.cpu
    double node_ram = 0.0;
    double node_stor = 0.0;
    double link_mbps = 0.0;  // sum of O'^t_l
};

struct MetricsSeries {
    std::vector<SlotRecord> records;
    std::vector<ProtectionRecord> protection;
    int total_arrived = 0;
    int total_accepted = 0;
    double final_acceptance_ratio = 100.0;
    double sum_objective = 0.0;  // accumulated per-slot admission objectives
};

// Eq.-21 acceptance ratio in percent; 100 when nothing arrived.
double acceptance_ratio(int accepted, int arrived);

std::string slot_csv_header();
std::string slot_csv_row(const SlotRecord& r);

} // namespace onsu

#endif
