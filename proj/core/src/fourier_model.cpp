#include "slp/fourier_model.hpp"

#include "slp/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace slp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Entry {
    std::size_t column;
    double value;
};

std::size_t yearly_offset() { return 1; }
std::size_t weekly_offset(const FourierConfig& c) { return 1 + 2 * static_cast<std::size_t>(c.yearly_harmonics); }
std::size_t daily_offset(const FourierConfig& c) {
    return weekly_offset(c) + 2 * static_cast<std::size_t>(c.weekly_harmonics);
}

void push_harmonics(std::vector<Entry>& row, std::size_t offset, int n, double fraction) {
    for (int m = 1; m <= n; ++m) {
        const double angle = kTwoPi * m * fraction;
        const auto col = offset + 2 * static_cast<std::size_t>(m - 1);
        row.push_back({col, std::sin(angle)});
        row.push_back({col + 1, std::cos(angle)});
    }
}

void sparse_row(Timestamp t, const FourierConfig& c, std::vector<Entry>& row) {
    row.clear();
    row.push_back({0, 1.0});
    push_harmonics(row, yearly_offset(), c.yearly_harmonics, year_phase(t));
    push_harmonics(row, weekly_offset(c), c.weekly_harmonics, week_phase(t));
    const auto block = static_cast<std::size_t>(daily_block_index(t.date(), c));
    push_harmonics(row, daily_offset(c) + block * 2 * static_cast<std::size_t>(c.daily_harmonics), c.daily_harmonics,
                   day_phase(t));
}

void validate(const FourierConfig& c) {
    if (c.yearly_harmonics < 1 || c.daily_harmonics < 1 || c.weekly_harmonics < 0) {
        throw ConfigError("harmonic counts must be at least 1 (weekly may be 0)");
    }
    if (c.daily_harmonics >= kSlotsPerDay / 2) throw ConfigError("too many daily harmonics for 96 slots");
}

std::string block_name(const FourierConfig& c, std::size_t block) {
    if (c.form == FourierForm::Extended) {
        return std::string(to_string(kSeasons[block / 3])) + "/" + std::string(to_string(kDayTypes[block % 3]));
    }
    return std::string(to_string(kSeasons[block / 2])) + (block % 2 ? "/weekend" : "/workday");
}

HarmonicBlock read_block(Period p, std::span<const double> coef, std::size_t offset, int n) {
    HarmonicBlock b{p, {}, {}};
    for (int m = 0; m < n; ++m) {
        b.sin_coef.push_back(coef[offset + 2 * static_cast<std::size_t>(m)]);
        b.cos_coef.push_back(coef[offset + 2 * static_cast<std::size_t>(m) + 1]);
    }
    return b;
}

FourierFit fit_impl(const AggregateSeries& agg, const FourierConfig& config, FourierDomain domain) {
    validate(config);
    const std::size_t p = config.columns();
    std::size_t rows = 0;
    for (std::size_t i = 0; i < agg.size(); ++i) {
        if (!agg.has(i)) continue;
        if (domain == FourierDomain::Log && !(agg.mean_kw[i] > 0.0)) {
            throw DataError("multiplicative Fourier fit needs positive values; slot " + agg.timestamp(i).to_string() +
                            " is not");
        }
        ++rows;
    }
    if (rows <= p) {
        throw DataError("Fourier fit needs more than " + std::to_string(p) + " nonempty slots, got " + std::to_string(rows));
    }
    auto target = [&](std::size_t i) { return domain == FourierDomain::Log ? std::log(agg.mean_kw[i]) : agg.mean_kw[i]; };

    // Normal equations from sparse rows: each row touches at most ~50 columns.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    std::vector<Entry> row;
    for (std::size_t i = 0; i < agg.size(); ++i) {
        if (!agg.has(i)) continue;
        sparse_row(agg.timestamp(i), config, row);
        const double y = target(i);
        for (const Entry& a : row) {
            rhs(static_cast<Eigen::Index>(a.column)) += a.value * y;
            for (const Entry& b : row) {
                if (b.column < a.column) continue;
                gram(static_cast<Eigen::Index>(a.column), static_cast<Eigen::Index>(b.column)) += a.value * b.value;
            }
        }
    }
    gram.triangularView<Eigen::StrictlyLower>() = gram.transpose().triangularView<Eigen::StrictlyLower>();

    const std::size_t d0 = daily_offset(config);
    for (std::size_t c = 0; c < p; ++c) {
        if (gram(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) > 0.0) continue;
        if (c >= d0) {
            const auto block = (c - d0) / (2 * static_cast<std::size_t>(config.daily_harmonics));
            throw NumericError("Fourier design is rank deficient: daily block " + block_name(config, block) +
                               " never occurs");
        }
        throw NumericError("Fourier design is rank deficient: column " + std::to_string(c) + " is empty");
    }
    // Jacobi scaling before the conditioning check and the solve.
    Eigen::VectorXd scale = gram.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = scale.asDiagonal() * gram * scale.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * hi)) throw NumericError("Fourier design is rank deficient (condition estimate too large)");
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(scaled);
    if (ldlt.info() != Eigen::Success) throw NumericError("Fourier normal equations could not be factorized");
    const Eigen::VectorXd coef = scale.asDiagonal() * ldlt.solve(scale.asDiagonal() * rhs);

    FourierFit out;
    out.model = FourierModel::from_coefficients(config, domain, std::span<const double>(coef.data(), p));

    // Residual orthogonality in the fitting domain.
    Eigen::VectorXd xr = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    double rr = 0.0;
    out.residuals.assign(agg.size(), kNaN);
    for (std::size_t i = 0; i < agg.size(); ++i) {
        if (!agg.has(i)) continue;
        sparse_row(agg.timestamp(i), config, row);
        double fitted = 0.0;
        for (const Entry& e : row) fitted += e.value * coef(static_cast<Eigen::Index>(e.column));
        const double r = target(i) - fitted;
        for (const Entry& e : row) xr(static_cast<Eigen::Index>(e.column)) += e.value * r;
        rr += r * r;
        out.residuals[i] = agg.mean_kw[i] - (domain == FourierDomain::Log ? std::exp(fitted) : fitted);
    }
    const double rnorm = std::sqrt(rr);
    if (rnorm > 0.0) {
        for (std::size_t c = 0; c < p; ++c) {
            const double cnorm = std::sqrt(gram(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)));
            out.max_orthogonality = std::max(out.max_orthogonality, std::abs(xr(static_cast<Eigen::Index>(c))) / (cnorm * rnorm));
        }
    }
    return out;
}

}  // namespace

std::size_t FourierConfig::columns() const {
    return 1 + 2 * static_cast<std::size_t>(yearly_harmonics) + 2 * static_cast<std::size_t>(weekly_harmonics) +
           2 * static_cast<std::size_t>(daily_harmonics) * static_cast<std::size_t>(daily_blocks());
}

int daily_block_index(Date date, const FourierConfig& config) {
    const Season s = season_of(date, config.calendar);
    const DayType t = classify_day(date, config.calendar);
    if (config.form == FourierForm::Extended) return static_cast<int>(ProfileSet::index(s, t));
    return static_cast<int>(s) * 2 + (t == DayType::Workday ? 0 : 1);
}

std::string_view to_string(Period period) {
    switch (period) {
        case Period::Year: return "year";
        case Period::Week: return "week";
        case Period::Day: return "day";
    }
    return "?";
}

double HarmonicBlock::operator()(double fraction) const {
    double s = 0.0;
    for (std::size_t m = 0; m < sin_coef.size(); ++m) {
        const double angle = kTwoPi * static_cast<double>(m + 1) * fraction;
        s += sin_coef[m] * std::sin(angle) + cos_coef[m] * std::cos(angle);
    }
    return s;
}

double year_phase(Timestamp t) {
    const int year = year_of(t.date());
    return static_cast<double>(t - Timestamp::from(first_day(year))) / static_cast<double>(slots_in_year(year));
}

double week_phase(Timestamp t) {
    const auto day = static_cast<int>(iso_weekday(t.date())) - 1;
    return static_cast<double>(day * kSlotsPerDay + t.slot_of_day()) / (7.0 * kSlotsPerDay);
}

double day_phase(Timestamp t) { return static_cast<double>(t.slot_of_day()) / kSlotsPerDay; }

std::vector<double> design_row(Timestamp t, const FourierConfig& config) {
    validate(config);
    std::vector<Entry> sparse;
    sparse_row(t, config, sparse);
    std::vector<double> row(config.columns(), 0.0);
    for (const Entry& e : sparse) row[e.column] = e.value;
    return row;
}

std::vector<double> FourierModel::coefficients() const {
    std::vector<double> out(config.columns(), 0.0);
    out[0] = intercept;
    auto write = [&](const HarmonicBlock& b, std::size_t offset) {
        for (std::size_t m = 0; m < b.sin_coef.size(); ++m) {
            out[offset + 2 * m] = b.sin_coef[m];
            out[offset + 2 * m + 1] = b.cos_coef[m];
        }
    };
    write(yearly, yearly_offset());
    if (weekly) write(*weekly, weekly_offset(config));
    for (std::size_t b = 0; b < daily.size(); ++b)
        write(daily[b], daily_offset(config) + b * 2 * static_cast<std::size_t>(config.daily_harmonics));
    return out;
}

FourierModel FourierModel::from_coefficients(const FourierConfig& config, FourierDomain domain,
                                             std::span<const double> coefficients) {
    validate(config);
    if (coefficients.size() != config.columns()) throw ConfigError("Fourier coefficient count does not match config");
    FourierModel m;
    m.config = config;
    m.domain = domain;
    m.intercept = coefficients[0];
    m.yearly = read_block(Period::Year, coefficients, yearly_offset(), config.yearly_harmonics);
    if (config.weekly_harmonics > 0)
        m.weekly = read_block(Period::Week, coefficients, weekly_offset(config), config.weekly_harmonics);
    for (int b = 0; b < config.daily_blocks(); ++b) {
        m.daily.push_back(read_block(Period::Day, coefficients,
                                     daily_offset(config) + static_cast<std::size_t>(b) * 2 *
                                                                static_cast<std::size_t>(config.daily_harmonics),
                                     config.daily_harmonics));
    }
    return m;
}

FourierFit fit(const AggregateSeries& agg, const FourierConfig& config) {
    return fit_impl(agg, config, FourierDomain::Additive);
}

FourierFit multiplicative_variant_fit(const AggregateSeries& agg, const FourierConfig& config) {
    return fit_impl(agg, config, FourierDomain::Log);
}

double predict(const FourierModel& model, Timestamp t) {
    double v = model.intercept + model.yearly(year_phase(t));
    if (model.weekly) v += (*model.weekly)(week_phase(t));
    v += model.daily[static_cast<std::size_t>(daily_block_index(t.date(), model.config))](day_phase(t));
    return model.domain == FourierDomain::Log ? std::exp(v) : v;
}

YearSeries predict_year(const FourierModel& model, int year) {
    YearSeries out{year, std::vector<double>(static_cast<std::size_t>(slots_in_year(year)))};
    const Timestamp start = Timestamp::from(first_day(year));
    for (std::size_t i = 0; i < out.kw.size(); ++i) out.kw[i] = predict(model, start + static_cast<std::int64_t>(i));
    return out;
}

std::vector<double> yearly_error_profile(const FourierModel& model, const AggregateSeries& agg) {
    std::vector<double> out(static_cast<std::size_t>(agg.days()), kNaN);
    for (int day = 0; day < agg.days(); ++day) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t q = 0; q < kSlotsPerDay; ++q) {
            const auto slot = static_cast<std::size_t>(day) * kSlotsPerDay + q;
            if (!agg.has(slot)) continue;
            sum += std::abs(predict(model, agg.timestamp(slot)) - agg.mean_kw[slot]);
            ++n;
        }
        if (n > 0) out[static_cast<std::size_t>(day)] = sum / n;
    }
    return out;
}

std::vector<double> weekly_curve(const FourierModel& model) {
    std::vector<double> out(7 * kSlotsPerDay, 0.0);
    if (!model.weekly) return out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*model.weekly)(static_cast<double>(i) / out.size());
    return out;
}

}  // namespace slp
