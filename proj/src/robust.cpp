#include "onsu/robust.hpp"

#include <algorithm>

#include "onsu/errors.hpp"

namespace onsu {

void RobustConfig::validate() const {
    if (gamma1 < 0 || gamma2 < 0)
        throw ValidationError("robust config: gamma values must be >= 0");
    if (delta1 < 0.0 || delta1 > 1.0 || delta2 < 0.0 || delta2 > 1.0)
        throw ValidationError("robust config: delta values must lie in [0, 1]");
}

namespace {

// Sum of the g largest values; equals the subset max because deviations are
// nonnegative.
double top_sum(std::vector<double>& dev, int g) {
    if (g <= 0 || dev.empty()) return 0.0;
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(g), dev.size());
    std::partial_sort(dev.begin(), dev.begin() + static_cast<std::ptrdiff_t>(take), dev.end(),
                      std::greater<double>());
    double s = 0.0;
    for (std::size_t i = 0; i < take; ++i) s += dev[i];
    return s;
}

} // namespace

ResourceVector worst_case_node_load(const std::vector<const VmSpec*>& vms_on_node, int gamma1,
                                    double delta1) {
    ResourceVector load;
    std::vector<double> dev;
    dev.reserve(vms_on_node.size());
    for (Res r : kAllRes) {
        double nominal = 0.0;
        dev.clear();
        for (const VmSpec* vm : vms_on_node) {
            nominal += vm->nominal[r];
            dev.push_back(delta1 * vm->nominal[r]);
        }
        load[r] = nominal + top_sum(dev, gamma1);
    }
    return load;
}

double worst_case_link_load(const std::vector<const VlSpec*>& vls_on_link, int gamma2,
                            double delta2) {
    double nominal = 0.0;
    std::vector<double> dev;
    dev.reserve(vls_on_link.size());
    for (const VlSpec* vl : vls_on_link) {
        nominal += vl->nominal_rate;
        dev.push_back(delta2 * vl->nominal_rate);
    }
    return nominal + top_sum(dev, gamma2);
}

} // namespace onsu
