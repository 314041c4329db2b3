#ifndef ONSU_SIMPLEX_HPP
#define ONSU_SIMPLEX_HPP

#include <vector>

namespace onsu::lp {

enum class RowSense { LE, EQ, GE };

struct Entry {
    int row = 0;
    double value = 0.0;
};

// min c'x  s.t.  rows (<=, =, >=) rhs,  lb <= x <= ub.
// Columns are sparse; use +/-kUnbounded for free bounds.
struct Problem {
    int n_rows = 0;
    std::vector<double> cost;               // per variable
    std::vector<double> lb, ub;             // per variable
    std::vector<std::vector<Entry>> cols;   // per variable, sparse column
    std::vector<RowSense> sense;            // per row
    std::vector<double> rhs;                // per row

    int n_vars() const { return static_cast<int>(cost.size()); }
};

inline constexpr double kUnbounded = 1e30;

enum class Status { Optimal, Infeasible, Unbounded, IterLimit, Failed };

struct Result {
    Status status = Status::Failed;
    double objective = 0.0;
    std::vector<double> x;  // structural variables only
    int iterations = 0;
};

// Bounded-variable two-phase primal simplex with an explicit dense basis
// inverse. Deterministic: Dantzig pricing with index tie-breaks, Bland's
// rule after a degeneracy stall.
Result solve(const Problem& p, int max_iterations = 0);

} // namespace onsu::lp

#endif
