#include "slp/io.hpp"

#include "slp/errors.hpp"
#include "slp/text.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace slp::io {

namespace {

using nlohmann::json;

std::string format_month_day(std::chrono::month_day md) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02u-%02u", static_cast<unsigned>(md.month()), static_cast<unsigned>(md.day()));
    return buf;
}

std::chrono::month_day parse_month_day(const std::string& text) {
    unsigned m = 0;
    unsigned d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%2u-%2u%c", &m, &d, &tail) != 2) throw ConfigError("bad month-day '" + text + "'");
    const std::chrono::month_day md{std::chrono::month{m}, std::chrono::day{d}};
    if (!md.ok()) throw ConfigError("bad month-day '" + text + "'");
    return md;
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, std::string("invalid JSON: ") + e.what());
    }
}

json calendar_json(const CalendarConfig& c) {
    json holidays = json::array();
    for (Date d : c.holidays()) holidays.push_back(format_date(d));
    json boundaries = json::array();
    for (const auto& b : c.boundaries()) {
        boundaries.push_back({{"start", format_month_day(b.start)}, {"season", std::string(to_string(b.season))}});
    }
    return {{"holidays", holidays},
            {"boundaries", boundaries},
            {"christmas_eve", std::string(to_string(c.christmas_eve_rule()))},
            {"new_years_eve", std::string(to_string(c.new_years_eve_rule()))}};
}

CalendarConfig calendar_parse(const json& j) {
    std::set<Date> holidays;
    for (const auto& d : field<std::vector<std::string>>(j, "holidays")) holidays.insert(parse_date(d));
    std::vector<SeasonBoundary> boundaries;
    for (const auto& b : field<json>(j, "boundaries")) {
        boundaries.push_back({parse_month_day(field<std::string>(b, "start")), parse_season(field<std::string>(b, "season"))});
    }
    return CalendarConfig(std::move(holidays), std::move(boundaries), parse_day_type(field<std::string>(j, "christmas_eve")),
                          parse_day_type(field<std::string>(j, "new_years_eve")));
}

json profiles_json(const ProfileSet& p) {
    json out = json::object();
    for (Season s : kSeasons) {
        for (DayType t : kDayTypes) {
            const auto& v = p.at(s, t).values();
            out[std::string(to_string(s)) + "/" + std::string(to_string(t))] = std::vector<double>(v.begin(), v.end());
        }
    }
    return out;
}

ProfileSet profiles_parse(const json& j) {
    ProfileSet p;
    for (Season s : kSeasons) {
        for (DayType t : kDayTypes) {
            const auto key = std::string(to_string(s)) + "/" + std::string(to_string(t));
            const auto v = field<std::vector<double>>(j, key.c_str());
            if (v.size() != kSlotsPerDay) throw ConfigError("profile " + key + " needs 96 values");
            std::array<double, kSlotsPerDay> a{};
            std::copy(v.begin(), v.end(), a.begin());
            p.set(s, t, DailyProfile(a));
        }
    }
    return p;
}

json slp_json(const SlpModel& m) {
    json j{{"kind", "slp"},
           {"curve", m.curve.coefficients()},
           {"profiles", profiles_json(m.profiles)},
           {"calendar", calendar_json(m.calendar)},
           {"composition", m.composition == Composition::Multiplicative ? "multiplicative" : "additive"},
           {"level_kw", m.level_kw}};
    if (m.transition) {
        json tr = json::array();
        for (const auto& t : m.transition->transitions) {
            tr.push_back({{"at", format_month_day(t.at)},
                          {"from", std::string(to_string(t.from))},
                          {"to", std::string(to_string(t.to))}});
        }
        j["transition"] = {{"duration_days", m.transition->duration_days}, {"transitions", tr}};
    } else {
        j["transition"] = nullptr;
    }
    return j;
}

json block_json(const HarmonicBlock& b) {
    return {{"period", std::string(to_string(b.period))}, {"sin", b.sin_coef}, {"cos", b.cos_coef}};
}

json fourier_json(const FourierModel& m) {
    json daily = json::array();
    for (const auto& b : m.daily) daily.push_back(block_json(b));
    return {{"kind", "fourier"},
            {"yearly_harmonics", m.config.yearly_harmonics},
            {"weekly_harmonics", m.config.weekly_harmonics},
            {"daily_harmonics", m.config.daily_harmonics},
            {"form", m.config.form == FourierForm::Extended ? "extended" : "two_day_type"},
            {"domain", m.domain == FourierDomain::Additive ? "additive" : "log"},
            {"calendar", calendar_json(m.config.calendar)},
            {"coefficients", m.coefficients()},
            {"intercept", m.intercept},
            {"yearly", block_json(m.yearly)},
            {"weekly", m.weekly ? block_json(*m.weekly) : json(nullptr)},
            {"daily", daily}};
}

}  // namespace

std::string to_json(const SlpModel& model) { return slp_json(model).dump(); }
std::string to_json(const FourierModel& model) { return fourier_json(model).dump(); }

std::string to_json(const GroundTruth& truth) {
    json households = json::array();
    for (const auto& h : truth.households) {
        json injected = json::array();
        for (const auto& r : h.injected) injected.push_back({{"kind", r.kind}, {"start", r.start}, {"length", r.length}});
        households.push_back({{"meter_id", h.meter_id},
                              {"level_factor", h.level_factor},
                              {"shift_slots", h.shift_slots},
                              {"habit_slots", h.habit_slots},
                              {"ev", h.ev},
                              {"pv", h.pv},
                              {"defect", h.defect},
                              {"gap", h.gap},
                              {"injected", injected}});
    }
    return json{{"year", truth.year},
                {"seed", truth.seed},
                {"model", slp_json(truth.model)},
                {"fourier", truth.fourier ? fourier_json(*truth.fourier) : json(nullptr)},
                {"base_energy_kwh", truth.base.energy_kwh()},
                {"households", households}}
        .dump();
}

SlpModel slp_model_from_json(std::string_view text) {
    const json j = parse(text);
    SlpModel m;
    m.curve = DynamisationCurve(field<std::vector<double>>(j, "curve"));
    m.profiles = profiles_parse(field<json>(j, "profiles"));
    m.calendar = calendar_parse(field<json>(j, "calendar"));
    const auto comp = field<std::string>(j, "composition");
    if (comp == "multiplicative") {
        m.composition = Composition::Multiplicative;
    } else if (comp == "additive") {
        m.composition = Composition::Additive;
    } else {
        throw ConfigError("unknown composition '" + comp + "'");
    }
    m.level_kw = field<double>(j, "level_kw");
    const json tr = field<json>(j, "transition");
    if (!tr.is_null()) {
        TransitionConfig t;
        t.duration_days = field<double>(tr, "duration_days");
        for (const auto& x : field<json>(tr, "transitions")) {
            t.transitions.push_back({parse_month_day(field<std::string>(x, "at")), parse_season(field<std::string>(x, "from")),
                                     parse_season(field<std::string>(x, "to"))});
        }
        m.transition = std::move(t);
    }
    return m;
}

FourierModel fourier_model_from_json(std::string_view text) {
    const json j = parse(text);
    FourierConfig c;
    c.yearly_harmonics = field<int>(j, "yearly_harmonics");
    c.weekly_harmonics = field<int>(j, "weekly_harmonics");
    c.daily_harmonics = field<int>(j, "daily_harmonics");
    const auto form = field<std::string>(j, "form");
    if (form == "extended") {
        c.form = FourierForm::Extended;
    } else if (form == "two_day_type") {
        c.form = FourierForm::TwoDayType;
    } else {
        throw ConfigError("unknown Fourier form '" + form + "'");
    }
    c.calendar = calendar_parse(field<json>(j, "calendar"));
    const auto domain = field<std::string>(j, "domain") == "log" ? FourierDomain::Log : FourierDomain::Additive;
    return FourierModel::from_coefficients(c, domain, field<std::vector<double>>(j, "coefficients"));
}

std::string calendar_to_json(const CalendarConfig& calendar) { return calendar_json(calendar).dump(); }
CalendarConfig calendar_from_json(std::string_view text) { return calendar_parse(parse(text)); }

void write_profiles_csv(std::ostream& out, const ProfileSet& profiles) {
    out << "slot,time";
    for (Season s : kSeasons)
        for (DayType t : kDayTypes) out << ',' << to_string(s) << '_' << to_string(t);
    out << '\n';
    for (int q = 0; q < kSlotsPerDay; ++q) {
        char hhmm[8];
        std::snprintf(hhmm, sizeof hhmm, "%02d:%02d", q / 4, (q % 4) * 15);
        out << q << ',' << hhmm;
        for (Season s : kSeasons)
            for (DayType t : kDayTypes) out << ',' << text::format_double(profiles.at(s, t)[static_cast<std::size_t>(q)]);
        out << '\n';
    }
}

void write_year_csv(std::ostream& out, const YearSeries& series) {
    out << "timestamp,kw\n";
    const Timestamp start = Timestamp::from(first_day(series.year));
    for (std::size_t i = 0; i < series.kw.size(); ++i) {
        out << (start + static_cast<std::int64_t>(i)).to_string() << ',' << text::format_double(series.kw[i]) << '\n';
    }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace slp::io
