#include "qlim/measure.hpp"

#include <cmath>

#include "qlim/errors.hpp"
#include "qlim/summation.hpp"

namespace qlim {

AtomicMeasure2D::AtomicMeasure2D(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (const Atom& a : atoms_) {
        if (!(a.x >= 0.0 && a.x <= 1.0 && a.y >= 0.0 && a.y <= 1.0))
            throw InvalidArgument("atom coordinates must lie in [0,1]");
        if (!(a.w >= 0.0) || !std::isfinite(a.w)) throw InvalidArgument("atom weights must be nonnegative");
    }
    if (total_mass() > 1.0 + 1e-12) throw InvalidArgument("atomic measure has mass above 1");
}

double AtomicMeasure2D::total_mass() const {
    CompensatedSum s;
    for (const Atom& a : atoms_) s.add(a.w);
    return s.value();
}

}  // namespace qlim
