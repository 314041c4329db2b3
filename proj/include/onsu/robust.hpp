#ifndef ONSU_ROBUST_HPP
#define ONSU_ROBUST_HPP

#include <vector>

#include "onsu/resources.hpp"
#include "onsu/workload.hpp"

namespace onsu {

// Gamma-robustness parameters. gamma bounds how many demands may deviate at
// once; delta is the relative size of a deviation.
struct RobustConfig {
    int gamma1 = 0;       // protected VM count per node
    int gamma2 = 0;       // protected VL count per link
    double delta1 = 0.0;  // VM demand deviation fraction, in [0, 1]
    double delta2 = 0.0;  // VL rate deviation fraction, in [0, 1]

    void validate() const;
};

// Worst-case robust load of a set of VMs on one node: per resource, the
// nominal sum plus the largest total deviation over any subset of at most
// gamma1 VMs (deviation of VM m is delta1 * nominal_m). This is the value
// the rho/z dual variables encode at optimum.
ResourceVector worst_case_node_load(const std::vector<const VmSpec*>& vms_on_node, int gamma1,
                                    double delta1);

// Same protection for VL rates sharing a physical link.
double worst_case_link_load(const std::vector<const VlSpec*>& vls_on_link, int gamma2,
                            double delta2);

} // namespace onsu

#endif
