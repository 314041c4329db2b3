#ifndef ONSU_RESOURCES_HPP
#define ONSU_RESOURCES_HPP

#include <array>
#include <cstddef>
#include <string_view>

namespace onsu {

// Index for the three node resource dimensions.
enum class Res : std::size_t { Cpu = 0, Ram = 1, Stor = 2 };
inline constexpr std::array<Res, 3> kAllRes{Res::Cpu, Res::Ram, Res::Stor};
inline constexpr std::string_view res_name(Res r) {
    switch (r) {
        case Res::Cpu: return "cpu";
        case Res::Ram: return "ram";
        default: return "stor";
    }
}

// (cpu cores, ram GB, storage GB) triple. Used for node capacities, VM
// demands, usage and robustness reservations. All components >= 0.
struct ResourceVector {
    double cpu = 0.0;
    double ram = 0.0;
    double storage = 0.0;

    double operator[](Res r) const {
        switch (r) {
            case Res::Cpu: return cpu;
            case Res::Ram: return ram;
            default: return storage;
        }
    }
    double& operator[](Res r) {
        switch (r) {
            case Res::Cpu: return cpu;
            case Res::Ram: return ram;
            default: return storage;
        }
    }

    ResourceVector& operator+=(const ResourceVector& o) {
        cpu += o.cpu;
        ram += o.ram;
        storage += o.storage;
        return *this;
    }
    ResourceVector& operator-=(const ResourceVector& o) {
        cpu -= o.cpu;
        ram -= o.ram;
        storage -= o.storage;
        return *this;
    }
    friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }
    friend ResourceVector operator-(ResourceVector a, const ResourceVector& b) { return a -= b; }
    friend ResourceVector operator*(double s, const ResourceVector& v) {
        return {s * v.cpu, s * v.ram, s * v.storage};
    }

    bool nonnegative(double tol = 0.0) const {
        return cpu >= -tol && ram >= -tol && storage >= -tol;
    }
    // Component-wise comparison: a <= b iff all three components are.
    bool all_leq(const ResourceVector& o, double tol = 0.0) const {
        return cpu <= o.cpu + tol && ram <= o.ram + tol && storage <= o.storage + tol;
    }
    bool operator==(const ResourceVector& o) const = default;
};

} // namespace onsu

#endif
