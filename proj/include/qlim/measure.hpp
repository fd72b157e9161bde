#pragma once

#include <vector>

namespace qlim {

struct Atom {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
};

// Finite nonnegative measure on [0,1]^2 with total mass at most 1 + 1e-12.
class AtomicMeasure2D {
public:
    AtomicMeasure2D() = default;
    explicit AtomicMeasure2D(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    double total_mass() const;

private:
    std::vector<Atom> atoms_;
};

}  // namespace qlim
