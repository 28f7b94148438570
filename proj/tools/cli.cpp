#include "cli.hpp"

#include "run_config.hpp"

#include "slp/daytype_classifier.hpp"
#include "slp/errors.hpp"
#include "slp/evaluation.hpp"
#include "slp/fourier_model.hpp"
#include "slp/ingestion.hpp"
#include "slp/io.hpp"
#include "slp/pipeline.hpp"
#include "slp/synth.hpp"
#include "slp/text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace slp::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Context {
    RunConfig cfg;
    std::string command;
    std::string module = "cli";
    std::ostream& out;
    std::ostream& err;
};

struct Dataset {
    int year = 0;
    std::vector<RawSeries> meters;
    std::set<Date> holidays;
};

// ---------------------------------------------------------------- artifacts

void write_json(const Context& ctx, const std::string& name, json j) {
    j["config_hash"] = ctx.cfg.hash();
    j["seed"] = ctx.cfg.seed;
    io::write_file_atomic(ctx.cfg.out / name, j.dump(2) + "\n");
}

std::string csv_header(const Context& ctx) {
    return "# config_hash=" + ctx.cfg.hash() + " seed=" + std::to_string(ctx.cfg.seed) + "\n";
}

void write_csv(const Context& ctx, const std::string& name, const std::string& body) {
    io::write_file_atomic(ctx.cfg.out / name, csv_header(ctx) + body);
}

void append_log(const Context& ctx, const std::string& status) {
    std::error_code ec;
    fs::create_directories(ctx.cfg.out, ec);
    std::ofstream log(ctx.cfg.out / "run.log", std::ios::app);
    if (!log) return;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    log << stamp << ' ' << ctx.command << " config_hash=" << ctx.cfg.hash() << " seed=" << ctx.cfg.seed << ' ' << status
        << '\n';
}

json model_json(const SlpModel& m) { return json::parse(io::to_json(m)); }
json model_json(const FourierModel& m) { return json::parse(io::to_json(m)); }

std::string num(double v) { return text::format_double(v); }

// ---------------------------------------------------------------- inputs

fs::path manifest_path(const Context& ctx) {
    fs::path p = ctx.cfg.manifest.empty() ? ctx.cfg.out / "manifest.json" : ctx.cfg.manifest;
    if (!fs::exists(p)) throw ConfigError("no dataset manifest at '" + p.string() + "'; pass --manifest or run synth first");
    return p;
}

Dataset load_dataset(Context& ctx) {
    ctx.module = "ingestion";
    const fs::path path = manifest_path(ctx);
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("manifest is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object() || !j.contains("meters") || !j["meters"].is_array()) {
        throw ConfigError("manifest needs a 'meters' array");
    }
    const fs::path base = path.parent_path();
    Dataset d;
    for (const auto& m : j["meters"]) {
        if (!m.is_object() || !m.contains("id") || !m.contains("path")) {
            throw ConfigError("every manifest meter needs 'id' and 'path'");
        }
        d.meters.push_back(read_series(base / m["path"].get<std::string>(), m["id"].get<std::string>()));
    }
    if (j.contains("holidays") && j["holidays"].is_string()) d.holidays = load_holidays(base / j["holidays"].get<std::string>());
    int year = 0;
    if (j.contains("year") && j["year"].is_number_integer()) year = j["year"].get<int>();
    if (year == 0 && !d.meters.empty() && !d.meters.front().empty()) year = year_of(d.meters.front().start().date());
    d.year = ctx.cfg.get_int("year", year);
    if (d.year == 0) throw ConfigError("dataset year unknown; set params.year");
    return d;
}

CalendarConfig load_calendar(Context& ctx, const Dataset& d) {
    CalendarConfig cal;
    const fs::path& p = ctx.cfg.calendar;
    if (!p.empty() && p.extension() == ".json") {
        cal = io::calendar_from_json(io::read_file(p));
    } else {
        cal = CalendarConfig::conventional(p.empty() ? d.holidays : load_holidays(p));
    }
    return cal.with_rules(parse_day_type(ctx.cfg.get("calendar.christmas_eve", std::string(to_string(cal.christmas_eve_rule())))),
                          parse_day_type(ctx.cfg.get("calendar.new_years_eve", std::string(to_string(cal.new_years_eve_rule())))));
}

IngestResult ingest_dataset(Context& ctx, const Dataset& d) {
    ctx.module = "ingestion";
    IngestOptions o;
    o.year = d.year;
    o.quality.max_constant_run = static_cast<std::size_t>(ctx.cfg.get_int("quality.max_constant_run", 96));
    o.quality.spike_factor = ctx.cfg.get_double("quality.spike_factor", o.quality.spike_factor);
    o.quality.reject_negative = ctx.cfg.get_bool("quality.reject_negative", true);
    o.drop_prosumers = ctx.cfg.get_bool("prosumer.drop", true);
    if (!ctx.cfg.exclusions.empty()) o.exclusions = load_exclusions(ctx.cfg.exclusions);
    return ingest(d.meters, o);
}

json validate_report(const Dataset& d, const IngestResult& r) {
    json accepted = json::array();
    for (std::size_t i = 0; i < r.accepted.size(); ++i) {
        const auto& s = r.accepted[i];
        accepted.push_back({{"meter_id", s.series.meter_id()},
                            {"coverage", s.coverage},
                            {"scale_factor", s.scale_factor},
                            {"defective_slots", r.defective_slots[i]}});
    }
    json rejected = json::array();
    for (const auto& x : r.rejected) rejected.push_back({{"meter_id", x.meter_id}, {"reason", x.reason}, {"detail", x.detail}});
    return {{"year", d.year},
            {"meters", d.meters.size()},
            {"accepted_count", r.accepted.size()},
            {"rejected_count", r.rejected.size()},
            {"accepted", accepted},
            {"rejected", rejected}};
}

struct Prepared {
    Dataset dataset;
    CalendarConfig calendar;
    IngestResult pool;
    AggregateSeries agg;
};

Prepared prepare(Context& ctx, bool write_validation) {
    Prepared p;
    p.dataset = load_dataset(ctx);
    p.calendar = load_calendar(ctx, p.dataset);
    p.pool = ingest_dataset(ctx, p.dataset);
    if (write_validation) write_json(ctx, "validate_report.json", validate_report(p.dataset, p.pool));
    if (p.pool.accepted.empty()) throw DataError("no meter passed validation (see validate_report.json)");
    ctx.module = "slp-builder";
    p.agg = aggregate(std::span<const ScaledSeries>(p.pool.accepted), p.dataset.year);
    return p;
}

PipelineOptions pipeline_options(const Context& ctx, const CalendarConfig& calendar) {
    PipelineOptions o;
    o.calendar = calendar;
    o.build.degree = ctx.cfg.get_int("build.degree", kDefaultCurveDegree);
    const auto comp = ctx.cfg.get("build.composition", "multiplicative");
    if (comp == "additive") {
        o.build.composition = Composition::Additive;
    } else if (comp != "multiplicative") {
        throw ConfigError("build.composition must be multiplicative or additive");
    }
    o.k_min = ctx.cfg.get_int("seasons.k_min", 2);
    o.k_max = ctx.cfg.get_int("seasons.k_max", 8);
    const int runs = ctx.cfg.get_int("seasons.runs", 10);
    if (runs < 1) throw ConfigError("seasons.runs must be positive");
    o.seeds.clear();
    for (int i = 0; i < runs; ++i) o.seeds.push_back(ctx.cfg.seed + static_cast<std::uint64_t>(i));
    o.durations = ctx.cfg.get_list("enhance.durations", {});
    o.smooth = ctx.cfg.get_bool("enhance.smooth", true);
    o.filter.window = ctx.cfg.get_int("filter.window", o.filter.window);
    o.filter.polyorder = ctx.cfg.get_int("filter.polyorder", o.filter.polyorder);
    return o;
}

FourierConfig fourier_config(const Context& ctx, const CalendarConfig& calendar) {
    FourierConfig c;
    c.calendar = calendar;
    c.yearly_harmonics = ctx.cfg.get_int("fourier.yearly", c.yearly_harmonics);
    c.weekly_harmonics = ctx.cfg.get_int("fourier.weekly", c.weekly_harmonics);
    c.daily_harmonics = ctx.cfg.get_int("fourier.daily", c.daily_harmonics);
    const auto form = ctx.cfg.get("fourier.form", "extended");
    if (form == "two_day_type") {
        c.form = FourierForm::TwoDayType;
    } else if (form != "extended") {
        throw ConfigError("fourier.form must be extended or two_day_type");
    }
    return c;
}

std::string profiles_csv(const ProfileSet& p) {
    std::ostringstream s;
    io::write_profiles_csv(s, p);
    return s.str();
}

std::string year_csv(const YearSeries& y) {
    std::ostringstream s;
    io::write_year_csv(s, y);
    return s.str();
}

std::string duration_csv(const DurationSearch& d) {
    std::string s = "duration_days,mae_kw\n";
    for (const auto& p : d.curve) s += num(p.duration_days) + "," + num(p.mae_kw) + "\n";
    return s;
}

json transitions_json(const std::vector<DetectedTransition>& ts) {
    json a = json::array();
    for (const auto& t : ts) {
        a.push_back({{"date", format_date(t.date)}, {"from", std::string(to_string(t.from))}, {"to", std::string(to_string(t.to))}});
    }
    return a;
}

DateRange parse_range(const std::string& key, const std::string& value) {
    const auto colon = value.find(':');
    if (colon == std::string::npos) throw ConfigError(key + " must be START:END");
    DateRange r{parse_date(value.substr(0, colon)), parse_date(value.substr(colon + 1))};
    if (r.end < r.start) throw ConfigError(key + " ends before it starts");
    return r;
}

// ---------------------------------------------------------------- commands

void cmd_validate(Context& ctx) {
    Dataset d = load_dataset(ctx);
    const IngestResult r = ingest_dataset(ctx, d);
    write_json(ctx, "validate_report.json", validate_report(d, r));
    ctx.out << "accepted " << r.accepted.size() << " of " << d.meters.size() << " meters\n";
    if (r.accepted.empty()) throw DataError("no meter passed validation");
}

void cmd_build(Context& ctx) {
    Prepared p = prepare(ctx, true);
    ctx.module = "slp-builder";
    const PipelineOptions o = pipeline_options(ctx, p.calendar);
    const SlpModel model = build_slp(p.agg, p.calendar, o.build);
    const YearSeries year = assemble(model, p.dataset.year);
    ctx.module = "evaluation";
    const double err = mae(year.kw, p.agg.mean_kw);
    json j = model_json(model);
    j["year"] = p.dataset.year;
    j["mae_kw"] = err;
    j["series"] = p.pool.accepted.size();
    write_json(ctx, "slp_model.json", j);
    write_csv(ctx, "slp_profiles.csv", profiles_csv(model.profiles));
    ctx.out << "built profile model from " << p.pool.accepted.size() << " meters, MAE " << num(err) << " kW\n";
}

void cmd_seasons(Context& ctx) {
    Prepared p = prepare(ctx, false);
    ctx.module = "season-discovery";
    const PipelineOptions o = pipeline_options(ctx, p.calendar);
    const SeasonDiscovery s = discover_seasons(p.agg, o);
    const DayShapeMatrix matrix = build_day_matrix(p.agg);

    json scores = json::array();
    for (const auto& k : s.clusters.scores) {
        scores.push_back({{"k", k.k}, {"mean_silhouette", k.mean_silhouette}, {"best_silhouette", k.best_silhouette}});
    }
    write_json(ctx, "seasons_report.json",
               {{"k", s.clusters.best.k},
                {"silhouette", s.clusters.best.silhouette},
                {"weak", s.clusters.weak},
                {"scores", scores},
                {"transitions", transitions_json(s.transitions)}});

    std::string occ = "iso_year,iso_week,days";
    for (int c = 0; c < s.clusters.best.k; ++c) occ += ",cluster_" + std::to_string(c);
    occ += "\n";
    for (const auto& w : weekly_occupancy(s.clusters.best, matrix.days())) {
        occ += std::to_string(w.week.year) + "," + std::to_string(w.week.week) + "," + std::to_string(w.days);
        for (double x : w.shares) occ += "," + num(x);
        occ += "\n";
    }
    write_csv(ctx, "seasons_occupancy.csv", occ);
    write_json(ctx, "calendar.json", json::parse(io::calendar_to_json(s.calendar)));
    if (s.clusters.weak) ctx.err << "warning: weak cluster structure (silhouette " << num(s.clusters.best.silhouette) << ")\n";
    ctx.out << "k = " << s.clusters.best.k << ", " << s.transitions.size() << " season changeovers\n";
}

void cmd_daytypes(Context& ctx) {
    Prepared p = prepare(ctx, false);
    ctx.module = "daytype-classifier";
    ForestParams fp;
    fp.n_trees = ctx.cfg.get_int("daytypes.trees", fp.n_trees);
    fp.max_depth = ctx.cfg.get_int("daytypes.depth", fp.max_depth);
    fp.seed = ctx.cfg.seed;
    const int folds = ctx.cfg.get_int("daytypes.folds", 5);
    const LabelledDays days = training_days(p.agg, p.calendar);
    const double acc = cross_val_accuracy(days.features, days.labels, fp, folds);
    const RandomForest forest = train_day_types(days, fp);
    const AuditReport audit = audit_special_days(forest, p.agg, p.calendar);

    json entries = json::array();
    for (const auto& e : audit.entries) {
        entries.push_back({{"date", format_date(e.date)},
                           {"category", e.category},
                           {"calendar_label", std::string(to_string(e.calendar_label))},
                           {"predicted", std::string(to_string(e.predicted))},
                           {"probabilities", e.probabilities}});
    }
    json summary = json::array();
    for (const auto& s : audit.summary) {
        summary.push_back({{"category", s.category}, {"majority", std::string(to_string(s.majority))}, {"share", s.share}, {"days", s.days}});
    }
    write_json(ctx, "daytypes_report.json",
               {{"cv_accuracy", acc}, {"folds", folds}, {"training_days", days.labels.size()}, {"audit", entries}, {"summary", summary}});
    ctx.out << "cross-validated accuracy " << text::format_fixed(acc, 4) << "\n";
}

void cmd_enhance(Context& ctx) {
    Prepared p = prepare(ctx, false);
    ctx.module = "enhancements";
    const PipelineOptions o = pipeline_options(ctx, p.calendar);
    const PipelineResult r = run_pipeline(p.agg, o);
    if (!r.discovery_applied) ctx.err << "warning: discovered seasons leave a season empty; adapted stage keeps the input calendar\n";
    ctx.module = "evaluation";
    const int y = p.dataset.year;
    json stages{{"baseline", mae(assemble(r.baseline, y).kw, p.agg.mean_kw)},
                {"adapted", mae(assemble(r.adapted, y).kw, p.agg.mean_kw)},
                {"blended", mae(assemble(r.blended, y).kw, p.agg.mean_kw)},
                {"final", mae(assemble(r.final_model, y).kw, p.agg.mean_kw)}};
    write_json(ctx, "enhance_report.json",
               {{"best_duration_days", r.duration.best_duration_days},
                {"best_mae_kw", r.duration.best_mae_kw},
                {"k", r.clusters.best.k},
                {"discovery_applied", r.discovery_applied},
                {"transitions", transitions_json(r.transitions)},
                {"smoothed", o.smooth},
                {"filter", {{"window", o.filter.window}, {"polyorder", o.filter.polyorder}}},
                {"stage_mae_kw", stages}});
    write_csv(ctx, "duration_curve.csv", duration_csv(r.duration));
    json m = model_json(r.final_model);
    m["year"] = y;
    write_json(ctx, "enhanced_model.json", m);
    write_csv(ctx, "enhanced_profiles.csv", profiles_csv(r.final_model.profiles));
    ctx.out << "best transition duration " << num(r.duration.best_duration_days) << " days\n";
}

void cmd_fourier(Context& ctx) {
    Prepared p = prepare(ctx, false);
    ctx.module = "fourier-model";
    const FourierConfig fc = fourier_config(ctx, p.calendar);
    const auto domain = ctx.cfg.get("fourier.domain", "additive");
    if (domain != "additive" && domain != "log") throw ConfigError("fourier.domain must be additive or log");
    const FourierFit f = domain == "log" ? multiplicative_variant_fit(p.agg, fc) : fit(p.agg, fc);
    ctx.module = "evaluation";
    const double err = mae(predict_year(f.model, p.dataset.year).kw, p.agg.mean_kw);
    json m = model_json(f.model);
    m["year"] = p.dataset.year;
    write_json(ctx, "fourier_model.json", m);
    write_json(ctx, "fourier_report.json",
               {{"mae_kw", err}, {"max_orthogonality", f.max_orthogonality}, {"columns", fc.columns()}, {"domain", domain}});

    std::string weekly = "slot_of_week,hours,kw\n";
    const auto wc = weekly_curve(f.model);
    for (std::size_t i = 0; i < wc.size(); ++i) weekly += std::to_string(i) + "," + num(i * kHoursPerSlot) + "," + num(wc[i]) + "\n";
    write_csv(ctx, "fourier_weekly.csv", weekly);

    std::string errors = "date,mae_kw\n";
    const auto ep = yearly_error_profile(f.model, p.agg);
    for (int d = 0; d < static_cast<int>(ep.size()); ++d) errors += format_date(p.agg.date(d)) + "," + num(ep[static_cast<std::size_t>(d)]) + "\n";
    write_csv(ctx, "fourier_error_profile.csv", errors);
    ctx.out << "Fourier model MAE " << num(err) << " kW, residual orthogonality " << num(f.max_orthogonality) << "\n";
}

void cmd_evaluate(Context& ctx) {
    Prepared p = prepare(ctx, false);
    const int y = p.dataset.year;
    std::vector<NamedSeries> models;
    CalendarConfig share_calendar = p.calendar;
    json report = json::object();

    for (const char* name : {"slp_model", "enhanced_model", "fourier_model"}) {
        const fs::path file = ctx.cfg.out / (std::string(name) + ".json");
        if (!fs::exists(file)) continue;
        const std::string text = io::read_file(file);
        const json j = json::parse(text);
        if (j.value("kind", "") == "fourier") {
            models.push_back({name, predict_year(io::fourier_model_from_json(text), y)});
        } else {
            models.push_back({name, assemble(io::slp_model_from_json(text), y)});
        }
    }
    if (ctx.cfg.get_bool("evaluate.table", true)) {
        ctx.module = "enhancements";
        const PipelineResult r = run_pipeline(p.agg, pipeline_options(ctx, p.calendar));
        models.push_back({"baseline", assemble(r.baseline, y)});
        models.push_back({"adapted", assemble(r.adapted, y)});
        models.push_back({"blended", assemble(r.blended, y)});
        models.push_back({"final", assemble(r.final_model, y)});
        write_csv(ctx, "duration_curve.csv", duration_csv(r.duration));
        report["best_duration_days"] = r.duration.best_duration_days;
        share_calendar = r.adapted.calendar;
    }
    if (models.empty()) throw ConfigError("nothing to evaluate: no model files in the output directory and evaluate.table=false");

    ctx.module = "evaluation";
    std::vector<EvalReport> rows;
    if (models.size() == 1) {
        rows.push_back({models.front().id, mae(models.front().series.kw, p.agg.mean_kw), std::nullopt, {}});
    } else {
        rows = compare_models(p.agg, models);
    }
    json table = json::array();
    std::string csv = "model,mae_kw\n";
    for (const auto& r : rows) {
        table.push_back({{"model", r.model_id}, {"mae_kw", r.mae_kw}});
        csv += r.model_id + "," + num(r.mae_kw) + "\n";
    }
    report["models"] = table;
    report["data_hash"] = data_hash(p.agg);
    report["series"] = p.pool.accepted.size();
    write_csv(ctx, "evaluation.csv", csv);

    // Mean absolute error per day for every model.
    std::string daily = "date";
    for (const auto& m : models) daily += "," + m.id;
    daily += "\n";
    for (int d = 0; d < p.agg.days(); ++d) {
        daily += format_date(p.agg.date(d));
        for (const auto& m : models) {
            double s = 0.0;
            int n = 0;
            for (int q = 0; q < kSlotsPerDay; ++q) {
                const auto i = static_cast<std::size_t>(d) * kSlotsPerDay + static_cast<std::size_t>(q);
                if (!p.agg.has(i)) continue;
                s += std::abs(m.series.kw[i] - p.agg.mean_kw[i]);
                ++n;
            }
            daily += "," + (n > 0 ? num(s / n) : std::string("nan"));
        }
        daily += "\n";
    }
    write_csv(ctx, "daily_error.csv", daily);

    if (ctx.cfg.get_bool("evaluate.share", false)) {
        ShareOptions so;
        so.shares = ctx.cfg.get_list("evaluate.shares", so.shares);
        so.repeats = ctx.cfg.get_int("evaluate.repeats", so.repeats);
        so.seed = ctx.cfg.seed;
        so.calendar = share_calendar;
        const auto po = pipeline_options(ctx, p.calendar);
        so.build = po.build;
        so.filter = po.filter;
        const ShareCurve c = share_experiment(p.pool.accepted, so);
        std::string s = "share,mae_filtered_kw,mae_unfiltered_kw\n";
        for (std::size_t i = 0; i < c.shares.size(); ++i) {
            s += num(c.shares[i]) + "," + num(c.mae_filtered[i]) + "," + num(c.mae_unfiltered[i]) + "\n";
        }
        write_csv(ctx, "share_curve.csv", s);
        if (c.shares.size() >= 4) report["kinks"] = kink_report(c);
    }
    if (ctx.cfg.has("evaluate.window_a") || ctx.cfg.has("evaluate.window_b")) {
        const DateRange a = parse_range("evaluate.window_a", ctx.cfg.get("evaluate.window_a", ""));
        const DateRange b = parse_range("evaluate.window_b", ctx.cfg.get("evaluate.window_b", ""));
        const auto cmp = window_compare(p.pool.accepted, a, b, p.calendar);
        std::string s = "slot,time";
        for (const auto& c : cmp) s += "," + std::string(to_string(c.day_type)) + "_a," + std::string(to_string(c.day_type)) + "_b";
        s += "\n";
        for (int q = 0; q < kSlotsPerDay; ++q) {
            char hhmm[8];
            std::snprintf(hhmm, sizeof hhmm, "%02d:%02d", q / 4, (q % 4) * 15);
            s += std::to_string(q) + "," + hhmm;
            for (const auto& c : cmp) {
                s += "," + (c.profile_a ? num((*c.profile_a)[static_cast<std::size_t>(q)]) : std::string("nan"));
                s += "," + (c.profile_b ? num((*c.profile_b)[static_cast<std::size_t>(q)]) : std::string("nan"));
            }
            s += "\n";
        }
        write_csv(ctx, "window_compare.csv", s);
    }
    write_json(ctx, "evaluation.json", report);
    for (const auto& r : rows) ctx.out << r.model_id << " MAE " << num(r.mae_kw) << " kW\n";
}

void cmd_synth(Context& ctx) {
    ctx.module = "synth";
    const int year = ctx.cfg.get_int("synth.year", 2021);
    SynthConfig c = realistic_config(ctx.cfg.get_int("synth.households", 100), ctx.cfg.seed);
    c.year = year;
    const double d = ctx.cfg.get_double("synth.transition_days", 21.0);
    c.planted = realistic_model(year, d);
    c.noise = ctx.cfg.get_double("synth.noise", c.noise);
    c.level_spread = ctx.cfg.get_double("synth.level_spread", c.level_spread);
    c.habit_events = ctx.cfg.get_int("synth.habits", c.habit_events);
    c.ev_rate = ctx.cfg.get_double("synth.ev_rate", 0.0);
    c.pv_rate = ctx.cfg.get_double("synth.pv_rate", 0.0);
    c.defect_rate = ctx.cfg.get_double("synth.defect_rate", 0.0);
    c.gap_rate = ctx.cfg.get_double("synth.gap_rate", 0.0);
    if (const double u = ctx.cfg.get_double("synth.weekly_uplift", 0.0); u != 0.0) c.weekly_uplift = WeeklyUplift{5, 56, 96, u};
    if (const double u = ctx.cfg.get_double("synth.year_end_surge", 0.0); u != 0.0) {
        c.date_uplifts.push_back({make_date(year, 12, 20), make_date(year, 12, 31), u, 0, kSlotsPerDay});
    }
    const SynthDataset ds = generate(c);

    json meters = json::array();
    const std::string header = csv_header(ctx);
    for (const auto& h : ds.households) {
        std::ostringstream s;
        write_series(s, h);
        const std::string rel = "meters/" + h.meter_id() + ".csv";
        io::write_file_atomic(ctx.cfg.out / rel, header + s.str());
        meters.push_back({{"id", h.meter_id()}, {"path", rel}});
    }
    std::string holidays = header;
    for (Date day : ds.truth.model.calendar.holidays()) holidays += format_date(day) + "\n";
    io::write_file_atomic(ctx.cfg.out / "holidays.txt", holidays);
    write_json(ctx, "manifest.json", {{"year", year}, {"holidays", "holidays.txt"}, {"meters", meters}});
    write_json(ctx, "ground_truth.json", json::parse(io::to_json(ds.truth)));
    ctx.out << "wrote " << ds.households.size() << " synthetic meters for " << year << "\n";
}

void cmd_export(Context& ctx) {
    ctx.module = "cli";
    fs::path model = ctx.cfg.get("export.model", "");
    if (model.empty()) {
        for (const char* name : {"enhanced_model.json", "slp_model.json", "fourier_model.json"}) {
            if (fs::exists(ctx.cfg.out / name)) {
                model = ctx.cfg.out / name;
                break;
            }
        }
        if (model.empty()) throw ConfigError("no model to export; set export.model");
    }
    if (!fs::exists(model)) throw ConfigError("model file '" + model.string() + "' does not exist");
    const std::string text = io::read_file(model);
    const json j = json::parse(text);
    int year = ctx.cfg.get_int("year", j.value("year", 0));
    if (year == 0) throw ConfigError("export needs a year; set params.year");
    const std::string stem = model.stem().string();
    if (j.value("kind", "") == "fourier") {
        const FourierModel f = io::fourier_model_from_json(text);
        write_csv(ctx, stem + "_year.csv", year_csv(predict_year(f, year)));
    } else {
        const SlpModel m = io::slp_model_from_json(text);
        write_csv(ctx, stem + "_profiles.csv", profiles_csv(m.profiles));
        write_csv(ctx, stem + "_year.csv", year_csv(assemble(m, year)));
    }
    ctx.out << "exported " << stem << " for " << year << "\n";
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const DataError*>(&e)) return kExitData;
    if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
    if (dynamic_cast<const json::exception*>(&e)) return kExitConfig;
    return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Standard load profile toolkit", "slp"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides ov;
    std::string config, manifest, outdir;
    std::uint64_t seed = 0;
    auto* config_opt = app.add_option("--config", config, "Run configuration (JSON)");
    auto* manifest_opt = app.add_option("--manifest", manifest, "Dataset manifest (JSON)");
    auto* out_opt = app.add_option("--out", outdir, "Output directory");
    auto* seed_opt = app.add_option("--seed", seed, "Random seed");
    app.add_option("--set", ov.sets, "Parameter override key=value (repeatable)");

    const std::map<std::string, std::pair<std::string, std::function<void(Context&)>>> commands{
        {"validate", {"Quality report of the dataset", cmd_validate}},
        {"build-slp", {"Conventional profile model build", cmd_build}},
        {"seasons", {"Season discovery and updated calendar", cmd_seasons}},
        {"daytypes", {"Day-type classifier validation and special-day audit", cmd_daytypes}},
        {"enhance", {"Transition blending, duration search and smoothing", cmd_enhance}},
        {"fourier", {"Fourier model fit and exports", cmd_fourier}},
        {"evaluate", {"Model comparison and experiment tables", cmd_evaluate}},
        {"synth", {"Generate a synthetic dataset", cmd_synth}},
        {"export", {"Export model tables", cmd_export}},
    };
    for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

    std::vector<std::string> argv_store{"slp"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    if (*config_opt) ov.config = fs::path(config);
    if (*manifest_opt) ov.manifest = fs::path(manifest);
    if (*out_opt) ov.out = fs::path(outdir);
    if (*seed_opt) ov.seed = seed;

    const std::string command = app.get_subcommands().front()->get_name();
    Context ctx{RunConfig{}, command, "cli", out, err};
    try {
        ctx.cfg = load_run_config(ov);
        commands.at(command).second(ctx);
    } catch (const std::exception& e) {
        err << "slp " << command << ": error in " << ctx.module << ": " << e.what() << "\n";
        append_log(ctx, "failed");
        return exit_code_for(e);
    }
    append_log(ctx, "ok");
    return kExitOk;
}

}  // namespace slp::cli
