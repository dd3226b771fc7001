#include <relbound/report.hpp>

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace relbound
{

using nlohmann::ordered_json;

std::string format_bound(const Rational &x)
{
    return to_scientific(x, 5, true);
}

namespace
{

const char *kErrorKinds[] = {"division-by-zero", "division-by-zero-range", "division-by-zero-point",
                             "negative-sqrt",    "invalid-float-op",       "overflow",
                             "zero-range",       "parse",                  "backend",
                             "usage"};

const char *kind_name(ErrorKind k)
{
    return kErrorKinds[static_cast<int>(k)];
}

ErrorKind kind_from_name(const std::string &s)
{
    for (int i = 0; i < static_cast<int>(std::size(kErrorKinds)); ++i) {
        if (s == kErrorKinds[i]) {
            return static_cast<ErrorKind>(i);
        }
    }
    throw Error(ErrorKind::Parse, "unknown error kind '" + s + "'");
}

// ---- json ----

ordered_json rat(const Rational &x)
{
    return ordered_json{{"exact", x.str()}, {"display", format_bound(x)}};
}

Rational rat_from(const ordered_json &j)
{
    return Rational::parse_fraction(j.at("exact").get<std::string>());
}

ordered_json interval_json(const Interval &x)
{
    return ordered_json{{"lo", x.lo().str()}, {"hi", x.hi().str()}};
}

Interval interval_from(const ordered_json &j)
{
    return Interval(Rational::parse_fraction(j.at("lo").get<std::string>()),
                    Rational::parse_fraction(j.at("hi").get<std::string>()));
}

ordered_json box_json(const Box &b)
{
    ordered_json arr = ordered_json::array();
    for (const auto &[name, x] : b.entries()) {
        ordered_json e = interval_json(x);
        e["name"] = name;
        arr.push_back(e);
    }
    return arr;
}

Box box_from(const ordered_json &j)
{
    std::vector<std::pair<std::string, Interval>> e;
    for (const auto &v : j) {
        e.emplace_back(v.at("name").get<std::string>(), interval_from(v));
    }
    return Box(e);
}

ordered_json points_json(const std::vector<Rational> &xs)
{
    ordered_json arr = ordered_json::array();
    for (const auto &x : xs) {
        arr.push_back(x.str());
    }
    return arr;
}

std::vector<Rational> points_from(const ordered_json &j)
{
    std::vector<Rational> out;
    for (const auto &v : j) {
        out.push_back(Rational::parse_fraction(v.get<std::string>()));
    }
    return out;
}

ordered_json subdivision_json(const SubdivisionReport &s, bool timings)
{
    ordered_json j;
    j["relBound"] = s.rel_bound ? rat(*s.rel_bound) : ordered_json(nullptr);
    j["wholeBound"] = s.whole_bound ? rat(*s.whole_bound) : ordered_json(nullptr);
    j["totalSubdomains"] = s.total;
    j["suppressed"] = s.suppressed;
    ordered_json failed = ordered_json::array();
    for (const auto &[box, abs] : s.failed) {
        failed.push_back({{"box", box_json(box)}, {"absBound", rat(abs)}});
    }
    j["failedSubdomains"] = failed;
    ordered_json per = ordered_json::array();
    for (const auto &o : s.per_subdomain) {
        ordered_json e;
        e["box"] = box_json(o.box);
        e["rel"] = o.rel ? rat(*o.rel) : ordered_json(nullptr);
        e["abs"] = o.abs ? rat(*o.abs) : ordered_json(nullptr);
        e["error"] = o.error;
        if (timings) {
            e["wallSeconds"] = o.wall_seconds;
        }
        per.push_back(e);
    }
    j["perSubdomain"] = per;
    j["errors"] = s.errors;
    return j;
}

SubdivisionReport subdivision_from(const ordered_json &j)
{
    SubdivisionReport s;
    if (!j.at("relBound").is_null()) {
        s.rel_bound = rat_from(j.at("relBound"));
    }
    if (!j.at("wholeBound").is_null()) {
        s.whole_bound = rat_from(j.at("wholeBound"));
    }
    s.total = j.at("totalSubdomains").get<int>();
    s.suppressed = j.at("suppressed").get<bool>();
    for (const auto &f : j.at("failedSubdomains")) {
        s.failed.emplace_back(box_from(f.at("box")), rat_from(f.at("absBound")));
    }
    for (const auto &e : j.at("perSubdomain")) {
        SubdomainOutcome o;
        o.box = box_from(e.at("box"));
        if (!e.at("rel").is_null()) {
            o.rel = rat_from(e.at("rel"));
        }
        if (!e.at("abs").is_null()) {
            o.abs = rat_from(e.at("abs"));
        }
        o.error = e.at("error").get<std::string>();
        o.wall_seconds = e.value("wallSeconds", 0.0);
        s.per_subdomain.push_back(std::move(o));
    }
    s.errors = j.at("errors").get<std::vector<std::string>>();
    return s;
}

ordered_json sample_json(const SampleReport &s)
{
    ordered_json j;
    j["maxAbsObserved"] = rat(s.max_abs);
    j["maxRelObserved"] = s.max_rel ? rat(*s.max_rel) : ordered_json(nullptr);
    j["samples"] = s.samples;
    j["seed"] = s.seed;
    j["skippedPoints"] = s.skipped;
    j["argmaxAbs"] = points_json(s.argmax_abs);
    j["argmaxRel"] = points_json(s.argmax_rel);
    return j;
}

SampleReport sample_from(const ordered_json &j)
{
    SampleReport s;
    s.max_abs = rat_from(j.at("maxAbsObserved"));
    if (!j.at("maxRelObserved").is_null()) {
        s.max_rel = rat_from(j.at("maxRelObserved"));
    }
    s.samples = j.at("samples").get<long>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.skipped = j.at("skippedPoints").get<long>();
    s.argmax_abs = points_from(j.at("argmaxAbs"));
    s.argmax_rel = points_from(j.at("argmaxRel"));
    return s;
}

ordered_json function_json(const FunctionReport &f, bool timings)
{
    ordered_json j;
    j["name"] = f.name;
    j["approach"] = to_string(f.approach);
    j["precision"] = f.precision;
    j["domain"] = box_json(f.domain);
    j["boundKind"] = f.relative ? "relative" : "absolute";
    j["bound"] = f.bound ? rat(*f.bound) : ordered_json(nullptr);
    j["resultRange"] = f.result_range ? interval_json(*f.result_range) : ordered_json(nullptr);
    j["remainder"] = f.remainder ? rat(*f.remainder) : ordered_json(nullptr);
    j["subdivision"] = f.subdivision ? subdivision_json(*f.subdivision, timings) : ordered_json(nullptr);
    j["underapprox"] = f.sample ? sample_json(*f.sample) : ordered_json(nullptr);
    j["errorKind"] = f.error_kind ? ordered_json(kind_name(*f.error_kind)) : ordered_json(nullptr);
    j["error"] = f.error;
    ordered_json trace = ordered_json::array();
    for (const auto &t : f.trace) {
        trace.push_back({{"op", t.op_id},
                         {"node", t.node},
                         {"range", interval_json(t.range_used)},
                         {"newRoundoff", rat(t.new_roundoff)}});
    }
    j["trace"] = trace;
    if (timings) {
        j["wallSeconds"] = f.wall_seconds;
    }
    return j;
}

FunctionReport function_from(const ordered_json &j)
{
    FunctionReport f;
    f.name = j.at("name").get<std::string>();
    f.approach = approach_from_string(j.at("approach").get<std::string>());
    f.precision = j.at("precision").get<std::string>();
    f.domain = box_from(j.at("domain"));
    f.relative = j.at("boundKind").get<std::string>() == "relative";
    if (!j.at("bound").is_null()) {
        f.bound = rat_from(j.at("bound"));
    }
    if (!j.at("resultRange").is_null()) {
        f.result_range = interval_from(j.at("resultRange"));
    }
    if (!j.at("remainder").is_null()) {
        f.remainder = rat_from(j.at("remainder"));
    }
    if (!j.at("subdivision").is_null()) {
        f.subdivision = subdivision_from(j.at("subdivision"));
    }
    if (!j.at("underapprox").is_null()) {
        f.sample = sample_from(j.at("underapprox"));
    }
    if (!j.at("errorKind").is_null()) {
        f.error_kind = kind_from_name(j.at("errorKind").get<std::string>());
    }
    f.error = j.at("error").get<std::string>();
    for (const auto &t : j.at("trace")) {
        f.trace.push_back({t.at("op").get<int>(), t.at("node").get<std::string>(), interval_from(t.at("range")),
                           rat_from(t.at("newRoundoff"))});
    }
    f.wall_seconds = j.value("wallSeconds", 0.0);
    return f;
}

// ---- text ----

std::string text_run(const RunReport &r)
{
    std::ostringstream os;
    for (const auto &f : r.functions) {
        os << f.name << " " << f.domain.str() << ", " << to_string(f.approach) << ", " << f.precision << "\n";
        const char *label = f.relative ? "relError: " : "absError: ";
        if (f.bound) {
            os << label << format_bound(*f.bound) << "\n";
        } else if (f.subdivision) {
            os << label << "-\n";
        }
        if (f.subdivision && !f.subdivision->failed.empty()) {
            os << "On several sub-intervals relative error cannot be computed.\n";
            os << "Computing absolute error on these sub-intervals.\n";
            for (const auto &[box, abs] : f.subdivision->failed) {
                os << "For intervals " << box.str() << ", absError: " << format_bound(abs) << "\n";
            }
        }
        if (f.subdivision) {
            for (const auto &e : f.subdivision->errors) {
                os << "Sub-interval error: " << e << "\n";
            }
        }
        if (f.error_kind) {
            os << "Error (" << kind_name(*f.error_kind) << "): " << f.error << "\n";
        }
        if (f.remainder) {
            os << "remainder: " << format_bound(*f.remainder) << "\n";
        }
        if (f.sample) {
            os << "underapprox: abs " << format_bound(f.sample->max_abs) << ", rel "
               << (f.sample->max_rel ? format_bound(*f.sample->max_rel) : std::string("-")) << " (" << f.sample->samples
               << " samples, seed " << f.sample->seed << ")\n";
        }
        for (const auto &t : f.trace) {
            os << "  op " << t.op_id << ": " << t.node << "  range " << t.range_used.str() << "  roundoff "
               << format_bound(t.new_roundoff) << "\n";
        }
        if (r.timings) {
            os << "time: " << std::fixed << std::setprecision(3) << f.wall_seconds << " s\n";
            os.unsetf(std::ios::fixed);
        }
    }
    return os.str();
}

// ---- csv ----

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string csv_run(const RunReport &r)
{
    std::ostringstream os;
    os << "function,row,approach,precision,box,bound_kind,bound,bound_exact,status,detail\n";
    for (const auto &f : r.functions) {
        const std::string kind = f.relative ? "relative" : "absolute";
        const std::string status = f.ok() ? "ok" : (f.error_kind ? kind_name(*f.error_kind) : "failed");
        os << csv_field(f.name) << ",summary," << to_string(f.approach) << "," << f.precision << ","
           << csv_field(f.domain.str()) << "," << kind << "," << (f.bound ? format_bound(*f.bound) : "") << ","
           << (f.bound ? f.bound->str() : "") << "," << status << "," << csv_field(f.error) << "\n";
        if (!f.subdivision) {
            continue;
        }
        for (const auto &o : f.subdivision->per_subdomain) {
            const bool rel = o.rel.has_value();
            const std::optional<Rational> &b = rel ? o.rel : o.abs;
            const std::string st = rel ? "ok" : (o.abs ? "zero-range" : "failed");
            os << csv_field(f.name) << ",subdomain," << to_string(f.approach) << "," << f.precision << ","
               << csv_field(o.box.str()) << "," << (rel || !o.abs ? "relative" : "absolute") << ","
               << (b ? format_bound(*b) : "") << "," << (b ? b->str() : "") << "," << st << ","
               << csv_field(o.error) << "\n";
        }
    }
    return os.str();
}

// ---- bench ----

std::string cell_text(const BenchCell &c)
{
    std::string s = c.value ? format_bound(*c.value) : "-";
    if (c.total > 0 && (c.failures > 0 || c.abs_fallback)) {
        s += " (" + (c.abs_fallback ? format_bound(*c.abs_fallback) : std::string("-")) + ", " +
             std::to_string(c.failures) + ")";
    }
    if (c.violation) {
        s += " !!";
    }
    return s;
}

std::string text_bench(const BenchReport &r)
{
    std::vector<std::string> header = {"benchmark", "underapprox"};
    header.insert(header.end(), r.columns.begin(), r.columns.end());
    std::vector<std::vector<std::string>> table = {header};
    for (const auto &row : r.rows) {
        std::vector<std::string> line = {row.name, row.underapprox ? format_bound(*row.underapprox) : "-"};
        for (const auto &c : row.cells) {
            line.push_back(cell_text(c));
        }
        table.push_back(line);
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto &line : table) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            width[i] = std::max(width[i], line[i].size());
        }
    }
    std::ostringstream os;
    for (const auto &line : table) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            os << std::left << std::setw(static_cast<int>(width[i]) + (i + 1 < line.size() ? 2 : 0)) << line[i];
        }
        os << "\n";
    }
    if (r.timings) {
        os << "\nwall time (s)\n";
        for (const auto &row : r.rows) {
            os << std::left << std::setw(static_cast<int>(width[0]) + 2) << row.name;
            for (const auto &c : row.cells) {
                os << std::fixed << std::setprecision(3) << c.wall_seconds << "  ";
            }
            os << "\n";
        }
        os.unsetf(std::ios::fixed);
    }
    if (r.violation()) {
        os << "\nSOUNDNESS FLOOR VIOLATION: a bound marked !! is below the sampled error\n";
    }
    return os.str();
}

std::string csv_bench(const BenchReport &r)
{
    std::ostringstream os;
    os << "benchmark,column,bound,bound_exact,abs_fallback,failures,subdomains,note,violation";
    os << (r.timings ? ",wall_seconds\n" : "\n");
    for (const auto &row : r.rows) {
        os << csv_field(row.name) << ",underapprox," << (row.underapprox ? format_bound(*row.underapprox) : "")
           << "," << (row.underapprox ? row.underapprox->str() : "") << ",,,,,0" << (r.timings ? ",\n" : "\n");
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            const BenchCell &c = row.cells[i];
            os << csv_field(row.name) << "," << r.columns[i] << "," << (c.value ? format_bound(*c.value) : "") << ","
               << (c.value ? c.value->str() : "") << "," << (c.abs_fallback ? format_bound(*c.abs_fallback) : "")
               << "," << c.failures << "," << c.total << "," << c.note << "," << (c.violation ? 1 : 0);
            if (r.timings) {
                os << "," << c.wall_seconds;
            }
            os << "\n";
        }
    }
    return os.str();
}

std::string json_bench(const BenchReport &r)
{
    ordered_json j;
    j["schemaVersion"] = RunReport::kSchemaVersion;
    j["columns"] = r.columns;
    ordered_json rows = ordered_json::array();
    for (const auto &row : r.rows) {
        ordered_json jr;
        jr["name"] = row.name;
        jr["domain"] = box_json(row.domain);
        jr["underapprox"] = row.underapprox ? rat(*row.underapprox) : ordered_json(nullptr);
        ordered_json cells = ordered_json::object();
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            const BenchCell &c = row.cells[i];
            ordered_json jc;
            jc["bound"] = c.value ? rat(*c.value) : ordered_json(nullptr);
            jc["absFallback"] = c.abs_fallback ? rat(*c.abs_fallback) : ordered_json(nullptr);
            jc["failures"] = c.failures;
            jc["subdomains"] = c.total;
            jc["note"] = c.note;
            jc["violation"] = c.violation;
            if (r.timings) {
                jc["wallSeconds"] = c.wall_seconds;
            }
            cells[r.columns[i]] = jc;
        }
        jr["cells"] = cells;
        rows.push_back(jr);
    }
    j["rows"] = rows;
    j["violation"] = r.violation();
    return j.dump(2) + "\n";
}

} // namespace

std::string to_json_text(const RunReport &r)
{
    ordered_json j;
    j["schemaVersion"] = r.schema_version;
    j["approach"] = r.approach;
    j["rangeMethod"] = r.range_method;
    j["backend"] = r.backend;
    j["precision"] = r.precision;
    j["timings"] = r.timings;
    ordered_json fs = ordered_json::array();
    for (const auto &f : r.functions) {
        fs.push_back(function_json(f, r.timings));
    }
    j["functions"] = fs;
    return j.dump(2) + "\n";
}

RunReport run_report_from_json(const std::string &text)
{
    try {
        const ordered_json j = ordered_json::parse(text);
        RunReport r;
        r.schema_version = j.at("schemaVersion").get<int>();
        if (r.schema_version != RunReport::kSchemaVersion) {
            throw Error(ErrorKind::Parse, "unsupported schemaVersion " + std::to_string(r.schema_version));
        }
        r.approach = j.at("approach").get<std::string>();
        r.range_method = j.at("rangeMethod").get<std::string>();
        r.backend = j.at("backend").get<std::string>();
        r.precision = j.at("precision").get<std::string>();
        r.timings = j.at("timings").get<bool>();
        for (const auto &f : j.at("functions")) {
            r.functions.push_back(function_from(f));
        }
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Parse, std::string("malformed report: ") + e.what());
    }
}

std::string render(const RunReport &r, OutputFormat fmt)
{
    switch (fmt) {
        case OutputFormat::Text:
            return text_run(r);
        case OutputFormat::Csv:
            return csv_run(r);
        case OutputFormat::Json:
            return to_json_text(r);
    }
    return {};
}

std::string render(const BenchReport &r, OutputFormat fmt)
{
    switch (fmt) {
        case OutputFormat::Text:
            return text_bench(r);
        case OutputFormat::Csv:
            return csv_bench(r);
        case OutputFormat::Json:
            return json_bench(r);
    }
    return {};
}

} // namespace relbound
