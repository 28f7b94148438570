#include "slp/model.hpp"

#include "slp/errors.hpp"

#include <cmath>
#include <numeric>

namespace slp {

bool AggregateSeries::complete_day(int day) const {
    const auto base = static_cast<std::size_t>(day) * kSlotsPerDay;
    for (std::size_t q = 0; q < kSlotsPerDay; ++q)
        if (contributors[base + q] == 0) return false;
    return true;
}

double YearSeries::energy_kwh() const { return std::accumulate(kw.begin(), kw.end(), 0.0) * kHoursPerSlot; }

DynamisationCurve::DynamisationCurve(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) throw ConfigError("dynamisation curve needs at least one coefficient");
    for (double c : coefficients_)
        if (!std::isfinite(c)) throw NumericError("dynamisation coefficient is not finite");
}

double DynamisationCurve::operator()(double x) const {
    double y = 0.0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) y = y * x + *it;
    return y;
}

double DynamisationCurve::mean() const {
    double sum = 0.0;
    for (int i = 0; i < 365; ++i) sum += (*this)(i / 365.0);
    return sum / 365.0;
}

DynamisationCurve DynamisationCurve::scaled(double factor) const {
    std::vector<double> c = coefficients_;
    for (double& v : c) v *= factor;
    return DynamisationCurve(std::move(c));
}

ProfileSet ProfileSet::scaled(double factor) const {
    ProfileSet out;
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
        std::array<double, kSlotsPerDay> v{};
        for (std::size_t q = 0; q < kSlotsPerDay; ++q) v[q] = profiles_[i][q] * factor;
        out.profiles_[i] = DailyProfile(v);
    }
    return out;
}

TransitionConfig TransitionConfig::from_calendar(const CalendarConfig& calendar, double duration_days) {
    TransitionConfig out;
    out.duration_days = duration_days;
    const auto& b = calendar.boundaries();
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Season previous = b[(i + b.size() - 1) % b.size()].season;
        if (previous != b[i].season) out.transitions.push_back({b[i].start, previous, b[i].season});
    }
    return out;
}

}  // namespace slp
