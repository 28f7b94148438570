#pragma once

#include "slp/calendar.hpp"
#include "slp/model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace slp {

enum class FourierForm : std::uint8_t {
    /// One daily block per (season, day type): nine blocks.
    Extended,
    /// One daily block per (season, workday | weekend): six blocks.
    TwoDayType,
};

enum class FourierDomain : std::uint8_t { Additive, Log };

struct FourierConfig {
    int yearly_harmonics = 4;
    int weekly_harmonics = 6;  // 0 drops the weekly block
    int daily_harmonics = 12;
    FourierForm form = FourierForm::Extended;
    CalendarConfig calendar{};

    int daily_blocks() const { return form == FourierForm::Extended ? 9 : 6; }
    std::size_t columns() const;

    bool operator==(const FourierConfig&) const = default;
};

/// Daily block active at a date: (season, day type) index for the extended form,
/// season * 2 + (weekend ? 1 : 0) for the two-day-type form.
int daily_block_index(Date date, const FourierConfig& config);

enum class Period : std::uint8_t { Year, Week, Day };
std::string_view to_string(Period period);

/// Sum over m of a_m sin(2 pi m f) + b_m cos(2 pi m f) at phase fraction f.
struct HarmonicBlock {
    Period period = Period::Day;
    std::vector<double> sin_coef;
    std::vector<double> cos_coef;

    int harmonics() const noexcept { return static_cast<int>(sin_coef.size()); }
    double operator()(double fraction) const;

    bool operator==(const HarmonicBlock&) const = default;
};

/// Phase fractions in [0, 1) of a timestamp within its year, ISO week and day.
double year_phase(Timestamp t);
double week_phase(Timestamp t);
double day_phase(Timestamp t);

/// Intercept, yearly terms, weekly terms, then every daily block's terms; the
/// daily columns of inactive blocks are zero. Pairs are ordered sin, cos.
std::vector<double> design_row(Timestamp t, const FourierConfig& config);

struct FourierModel {
    FourierConfig config;
    FourierDomain domain = FourierDomain::Additive;
    double intercept = 0.0;
    HarmonicBlock yearly{Period::Year, {}, {}};
    std::optional<HarmonicBlock> weekly;
    std::vector<HarmonicBlock> daily;

    /// Coefficients in design_row column order.
    std::vector<double> coefficients() const;
    static FourierModel from_coefficients(const FourierConfig& config, FourierDomain domain,
                                          std::span<const double> coefficients);

    bool operator==(const FourierModel&) const = default;
};

struct FourierFit {
    FourierModel model;
    /// Aggregate minus prediction in kW; NaN on empty slots.
    std::vector<double> residuals;
    /// Largest |x_j . r| / (|x_j| |r|) over design columns, in the fitting domain.
    double max_orthogonality = 0.0;
};

/// Ordinary least squares on the nonempty aggregate slots. Throws NumericError
/// when the design is rank deficient (e.g. a daily block never occurs) and
/// DataError when there are fewer slots than coefficients.
FourierFit fit(const AggregateSeries& agg, const FourierConfig& config);

/// Least squares on log values; predictions exponentiate. Throws DataError on
/// non-positive values.
FourierFit multiplicative_variant_fit(const AggregateSeries& agg, const FourierConfig& config);

double predict(const FourierModel& model, Timestamp t);
YearSeries predict_year(const FourierModel& model, int year);

/// Mean absolute error per day of the aggregate's year; NaN for days without data.
std::vector<double> yearly_error_profile(const FourierModel& model, const AggregateSeries& agg);

/// The weekly block over one week starting Monday 00:00, 672 values.
std::vector<double> weekly_curve(const FourierModel& model);

}  // namespace slp
