#ifndef ORBIGW_PIPELINE_HPP
#define ORBIGW_PIPELINE_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orbigw/errors.hpp"
#include "orbigw/extended_git.hpp"
#include "orbigw/i_function.hpp"
#include "orbigw/mirror.hpp"
#include "orbigw/version.hpp"

namespace orbigw {

using json = nlohmann::json;

struct PhiDescriptor {
    Rational alpha;
    std::vector<int> lambda; // meaningful for dimension-0 sectors only
    bool has_lambda = false;
};

struct RunConfig {
    std::vector<long> weights;
    std::vector<long> degrees;
    int truncation = 5;
    bool auto_extension = true;
    std::vector<PhiDescriptor> extension;
    std::vector<std::string> outputs; // validated subset, de-duplicated, sorted
    std::string format = "text";
    std::string cache_dir; // empty = no cache

    bool wants(const std::string& o) const {
        return std::find(outputs.begin(), outputs.end(), o) != outputs.end();
    }
};

inline const std::set<std::string>& known_outputs() {
    static const std::set<std::string> k{"sectors",   "basis",      "git",         "i-function",
                                         "mirror-map", "invariants", "cross-checks"};
    return k;
}

inline RunConfig parse_config_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("config must be a JSON object");
    RunConfig cfg;
    if (!doc.contains("weights") || !doc["weights"].is_array())
        throw ValidationError("config field 'weights' must be an integer array");
    for (const auto& v : doc["weights"]) {
        if (!v.is_number_integer()) throw ValidationError("config field 'weights' must be integers");
        cfg.weights.push_back(v.get<long>());
    }
    if (!doc.contains("degrees") || !doc["degrees"].is_array())
        throw ValidationError("config field 'degrees' must be an integer array");
    for (const auto& v : doc["degrees"]) {
        if (!v.is_number_integer()) throw ValidationError("config field 'degrees' must be integers");
        cfg.degrees.push_back(v.get<long>());
    }
    if (doc.contains("truncationTotalDegree"))
        cfg.truncation = doc["truncationTotalDegree"].get<int>();
    else if (doc.contains("truncation"))
        cfg.truncation = doc["truncation"].get<int>();
    if (cfg.truncation < 0) throw ValidationError("config field 'truncationTotalDegree' must be >= 0");

    if (doc.contains("extension")) {
        const json& e = doc["extension"];
        if (e.is_string()) {
            if (e.get<std::string>() != "auto")
                throw ValidationError("config field 'extension' must be \"auto\" or a class list");
        } else if (e.is_array()) {
            cfg.auto_extension = false;
            for (const auto& item : e) {
                if (!item.is_object() || !item.contains("alpha"))
                    throw ValidationError("extension classes need an 'alpha' field");
                PhiDescriptor d;
                d.alpha = Rational::from_string(item["alpha"].get<std::string>());
                if (item.contains("lambda")) {
                    d.has_lambda = true;
                    for (const auto& v : item["lambda"]) d.lambda.push_back(v.get<int>());
                    std::sort(d.lambda.begin(), d.lambda.end());
                }
                cfg.extension.push_back(std::move(d));
            }
        } else {
            throw ValidationError("config field 'extension' must be \"auto\" or a class list");
        }
    }

    if (doc.contains("outputs")) {
        for (const auto& v : doc["outputs"]) {
            std::string o = v.get<std::string>();
            if (!known_outputs().count(o))
                throw ValidationError("unknown output '" + o + "' in config field 'outputs'");
            cfg.outputs.push_back(o);
        }
        std::sort(cfg.outputs.begin(), cfg.outputs.end());
        cfg.outputs.erase(std::unique(cfg.outputs.begin(), cfg.outputs.end()), cfg.outputs.end());
    }
    if (cfg.outputs.empty()) cfg.outputs = {"invariants"};

    if (doc.contains("format")) {
        cfg.format = doc["format"].get<std::string>();
        if (cfg.format != "text" && cfg.format != "json" && cfg.format != "csv")
            throw ValidationError("config field 'format' must be text, json or csv");
    }
    if (doc.contains("cacheDir")) cfg.cache_dir = doc["cacheDir"].get<std::string>();
    return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    return parse_config_json(doc);
}

// Canonical echo of the effective configuration; this is what the cache key
// and content hash are computed from.
inline json config_echo(const RunConfig& cfg) {
    json j;
    j["weights"] = cfg.weights;
    j["degrees"] = cfg.degrees;
    j["truncationTotalDegree"] = cfg.truncation;
    if (cfg.auto_extension) {
        j["extension"] = "auto";
    } else {
        json arr = json::array();
        for (const auto& d : cfg.extension) {
            json item;
            item["alpha"] = d.alpha.to_string();
            if (d.has_lambda) item["lambda"] = d.lambda;
            arr.push_back(item);
        }
        j["extension"] = arr;
    }
    j["outputs"] = cfg.outputs;
    j["format"] = cfg.format;
    return j;
}

inline std::string fnv_hash_hex(const std::string& bytes) {
    std::uint64_t h1 = 1469598103934665603ull, h2 = 0xdeadbeefcafef00dull;
    for (unsigned char c : bytes) {
        h1 = (h1 ^ c) * 1099511628211ull;
        h2 = (h2 ^ c) * 0x100000001b3ull + 0x9e3779b97f4a7c15ull;
    }
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(h1),
                  static_cast<unsigned long long>(h2));
    return std::string(buf);
}

// Resolves the configured extension against the canonical degree-2 basis.
inline std::vector<int> resolve_extension(const CohomologyModel& model, const RunConfig& cfg) {
    if (cfg.auto_extension) return model.degree2_twisted();
    std::vector<int> phi;
    for (const auto& d : cfg.extension) {
        int s = model.sector_index(d.alpha);
        if (s < 0)
            throw ValidationError("extension class alpha=" + d.alpha.to_string() +
                                  " is not a sector of this target");
        const Sector& sec = model.sectors()[s];
        int idx = -1;
        if (sec.dim == 1) {
            if (d.has_lambda && !d.lambda.empty())
                throw ValidationError("extension class alpha=" + d.alpha.to_string() +
                                      " is positive-dimensional and takes no lambda");
            idx = model.sector_class(s, 0, -1);
        } else {
            const auto& cyc = model.cycles(s);
            for (std::size_t c = 0; c < cyc.size(); ++c)
                if (cyc[c].lambda == d.lambda) idx = model.sector_class(s, 0, static_cast<int>(c));
            if (idx < 0)
                throw ValidationError("extension class alpha=" + d.alpha.to_string() +
                                      " names no populated coordinate stratum");
        }
        if (idx < 0 || model.basis()[idx].cr_degree != 2)
            throw ValidationError("extension class alpha=" + d.alpha.to_string() +
                                  " is not a degree-2 admissible class");
        if (std::find(phi.begin(), phi.end(), idx) != phi.end())
            throw ValidationError("extension lists the class " + model.basis()[idx].label +
                                  " twice");
        phi.push_back(idx);
    }
    return phi;
}

struct ResultBundle {
    json body;             // deterministic payload (config, engineVersion, outputs, contentHash)
    double seconds = 0.0;  // wall-clock, reported on stderr only
    bool from_cache = false;
};

namespace pipeline_detail {

inline json sectors_json(const CohomologyModel& model) {
    json arr = json::array();
    for (std::size_t s = 0; s < model.sectors().size(); ++s) {
        const Sector& sec = model.sectors()[s];
        json j;
        j["alpha"] = sec.alpha.to_string();
        j["r"] = sec.r;
        j["dim"] = sec.dim;
        j["age"] = sec.age;
        j["fixedCoordinates"] = sec.fixed_coords;
        j["fixedEquations"] = sec.fixed_eqs;
        if (!sec.untwisted() && sec.dim == 0) {
            json cyc = json::array();
            for (const auto& c : model.cycles(static_cast<int>(s))) {
                json cj;
                cj["lambda"] = c.lambda;
                cj["gamma"] = c.gamma;
                cj["closureDegree"] = c.closure_degree.to_string();
                cj["openStratumMass"] = c.open_mass.to_string();
                cyc.push_back(cj);
            }
            j["specialCycles"] = cyc;
        }
        arr.push_back(j);
    }
    return arr;
}

inline json basis_json(const CohomologyModel& model) {
    json arr = json::array();
    for (const auto& b : model.basis()) {
        json j;
        j["label"] = b.label;
        j["crDegree"] = b.cr_degree;
        j["alpha"] = model.sectors()[b.sector].alpha.to_string();
        switch (b.kind) {
            case ClassKind::UntwistedPower: j["kind"] = "untwistedPower"; break;
            case ClassKind::SectorUnit: j["kind"] = "sectorFundamental"; break;
            case ClassKind::SectorHyperplane: j["kind"] = "sectorHyperplane"; break;
            case ClassKind::SpecialCycle: j["kind"] = "specialCycle"; break;
        }
        arr.push_back(j);
    }
    return arr;
}

inline json git_json(const ExtendedGIT& git) {
    json j;
    j["m"] = git.m();
    j["w"] = git.w();
    j["weightMatrix"] = git.weight_matrix();
    j["multidegrees"] = git.multidegrees();
    json alphas = json::array();
    for (const auto& a : git.alphas()) alphas.push_back(a.to_string());
    j["alphas"] = alphas;
    json labels = json::array();
    for (int idx : git.phi_classes()) labels.push_back(git.model().basis()[idx].label);
    j["phi"] = labels;
    return j;
}

inline json series_terms_json(const ScalarSeries& s) {
    json arr = json::array();
    for (const auto& [m, c] : s.terms()) {
        json t;
        t["d"] = m.as_vector();
        t["value"] = c.to_string();
        arr.push_back(t);
    }
    return arr;
}

inline json i_function_json(const ExtendedGIT& git, const CohomSeries& I) {
    json arr = json::array();
    for (const auto& rec : dump_i_function(git, I)) {
        json j;
        j["d"] = rec.d.as_vector();
        j["alpha"] = rec.alpha.to_string();
        j["class"] = rec.class_label;
        j["hPower"] = rec.h_power;
        j["zExponent"] = rec.z_exponent;
        j["value"] = rec.coefficient.to_string();
        arr.push_back(j);
    }
    return arr;
}

inline json invariants_json(const GeneratingFunction& F) {
    json arr = json::array();
    for (const auto& e : F.entries) {
        json j;
        j["d"] = e.d;
        j["k"] = e.k.as_vector();
        j["value"] = e.bracket.to_string();
        arr.push_back(j);
    }
    return arr;
}

} // namespace pipeline_detail

// Runs every stage the requested outputs need. Throws ValidationError /
// NonInvertibleExtension / ExtractionInconsistency / InternalError; the CLI
// maps those to exit codes 2 / 3 / 4 / 4.
inline ResultBundle run_pipeline(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    TargetSpec target = validate_target(cfg.weights, cfg.degrees);
    CohomologyModel model(target);

    json outputs;
    if (cfg.wants("sectors")) outputs["sectors"] = pipeline_detail::sectors_json(model);
    if (cfg.wants("basis")) {
        outputs["basis"] = pipeline_detail::basis_json(model);
        json phi = json::array();
        for (int idx : model.degree2_twisted()) phi.push_back(model.basis()[idx].label);
        outputs["degree2Twisted"] = phi;
    }

    bool need_git = cfg.wants("git") || cfg.wants("i-function") || cfg.wants("mirror-map") ||
                    cfg.wants("invariants") || cfg.wants("cross-checks");
    std::optional<ExtendedGIT> git;
    if (need_git) {
        git.emplace(model, resolve_extension(model, cfg));
        verify_calabi_yau(*git);
        if (cfg.wants("git")) outputs["git"] = pipeline_detail::git_json(*git);
    }

    bool need_i = cfg.wants("i-function") || cfg.wants("mirror-map") || cfg.wants("invariants") ||
                  cfg.wants("cross-checks");
    std::optional<CohomSeries> I;
    std::optional<MuDecomposition> mu;
    std::optional<GeneratingFunction> F;
    std::optional<CohomSeries> J;
    std::optional<MirrorMap> mirror;
    if (need_i) {
        I = assemble_i_function(*git, cfg.truncation);
        if (cfg.wants("i-function")) outputs["iFunction"] = pipeline_detail::i_function_json(*git, *I);

        bool need_mirror = cfg.wants("mirror-map") || cfg.wants("invariants") || cfg.wants("cross-checks");
        if (need_mirror && cfg.truncation > 0) {
            mu = extract_mu(*git, *I);
            validate_extension(*mu);
            mirror = build_mirror_map(*git, *mu);
            invert_mirror_map(*git, *mirror);
            if (cfg.wants("mirror-map")) {
                json mj;
                json fwd = json::array(), inv = json::array();
                auto qt = git->qt_names();
                auto qn = git->q_names();
                for (int i = 0; i <= git->m(); ++i) {
                    json f;
                    f["var"] = qt[i];
                    f["terms"] = pipeline_detail::series_terms_json(mirror->forward[i]);
                    fwd.push_back(f);
                    json g;
                    g["var"] = qn[i];
                    g["terms"] = pipeline_detail::series_terms_json(mirror->inverse[i]);
                    inv.push_back(g);
                }
                mj["forward"] = fwd;
                mj["inverse"] = inv;
                mj["variables"] = qt;
                outputs["mirrorMap"] = mj;
            }
            if (cfg.wants("invariants") || cfg.wants("cross-checks")) {
                J = transform_to_j(*git, *I, *mu, mirror->inverse);
                check_j_shape(*git, *J);
                F = extract_f(*git, *J);
                if (cfg.wants("invariants")) outputs["invariants"] = pipeline_detail::invariants_json(*F);
            }
        } else if (need_mirror) {
            // truncation 0: everything is trivial
            if (cfg.wants("mirror-map")) outputs["mirrorMap"] = json::object();
            if (cfg.wants("invariants")) outputs["invariants"] = json::array();
            if (cfg.wants("cross-checks")) F.emplace();
        }
    }

    if (cfg.wants("cross-checks")) {
        json checks = json::array();
        auto add = [&checks](const std::string& name, bool pass, const std::string& detail) {
            json c;
            c["name"] = name;
            c["pass"] = pass;
            c["detail"] = detail;
            checks.push_back(c);
        };
        bool age_ok = true;
        for (const auto& s : model.sectors()) {
            if (s.untwisted()) continue;
            int partner = model.sector_index(Rational(1) - s.alpha);
            if (partner < 0 || s.age + model.sectors()[partner].age != 3 - s.dim) age_ok = false;
        }
        add("age-duality", age_ok, "age(a) + age(1-a) = 3 - dim on all twisted sectors");
        bool mass_ok = true;
        for (std::size_t s = 0; s < model.sectors().size(); ++s) {
            const Sector& sec = model.sectors()[s];
            if (sec.untwisted() || sec.dim != 0) continue;
            Rational total(0);
            for (const auto& c : model.cycles(static_cast<int>(s))) total += c.open_mass;
            Rational closure = detail::cycle_closure_degree(
                target, sec, {}, detail::cycle_gamma(target, sec, {}));
            if (total != closure) mass_ok = false;
        }
        add("stratum-mass-sum", mass_ok, "open-stratum masses add up to the closure degree");
        if (git) {
            bool cy_ok = true;
            try {
                verify_calabi_yau(*git);
            } catch (const CYViolation&) {
                cy_ok = false;
            }
            add("cy-columns", cy_ok, "column sums of the weight matrix equal the degree sums");
        }
        if (J) {
            bool jshape = true;
            try {
                check_j_shape(*git, *J);
            } catch (const InternalError&) {
                jshape = false;
            }
            add("j-shape", jshape, "z^0 row is 1 and the z^-1 row is sum t_i phi_i");
            add("divisor-row", check_divisor_row(*git, *J, *F),
                "H^2 row matches (d / w*deg) * F at every positive degree");
        }
        outputs["crossChecks"] = checks;
    }

    json body;
    body["config"] = config_echo(cfg);
    body["engineVersion"] = kEngineVersion;
    body["outputs"] = outputs;
    body["contentHash"] = fnv_hash_hex(body.dump());

    ResultBundle bundle;
    bundle.body = std::move(body);
    bundle.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bundle;
}

// --- rendering ---------------------------------------------------------

namespace pipeline_detail {

inline std::string render_json(const json& body) { return body.dump(2) + "\n"; }

inline std::string render_csv(const json& body) {
    std::string out = "d,k,value\n";
    if (body["outputs"].contains("invariants"))
        for (const auto& rec : body["outputs"]["invariants"]) {
            out += std::to_string(rec["d"].get<long>()) + ",";
            std::string k;
            for (const auto& v : rec["k"]) k += (k.empty() ? "" : " ") + std::to_string(v.get<int>());
            out += k + "," + rec["value"].get<std::string>() + "\n";
        }
    return out;
}

inline std::string render_text(const json& body) {
    std::ostringstream os;
    const json& cfg = body["config"];
    os << "target: weights [";
    for (std::size_t i = 0; i < cfg["weights"].size(); ++i)
        os << (i ? "," : "") << cfg["weights"][i].get<long>();
    os << "], degrees [";
    for (std::size_t i = 0; i < cfg["degrees"].size(); ++i)
        os << (i ? "," : "") << cfg["degrees"][i].get<long>();
    os << "], truncation " << cfg["truncationTotalDegree"].get<int>() << "\n";
    const json& outs = body["outputs"];
    if (outs.contains("sectors")) {
        os << "\nsectors:\n";
        for (const auto& s : outs["sectors"]) {
            os << "  alpha=" << s["alpha"].get<std::string>() << " r=" << s["r"].get<long>()
               << " dim=" << s["dim"].get<int>() << " age=" << s["age"].get<long>() << "\n";
            if (s.contains("specialCycles"))
                for (const auto& c : s["specialCycles"]) {
                    os << "    stratum lambda=[";
                    for (std::size_t i = 0; i < c["lambda"].size(); ++i)
                        os << (i ? "," : "") << c["lambda"][i].get<int>();
                    os << "] mass=" << c["openStratumMass"].get<std::string>() << "\n";
                }
        }
    }
    if (outs.contains("basis")) {
        os << "\nadmissible basis:\n";
        for (const auto& b : outs["basis"])
            os << "  " << b["label"].get<std::string>() << "  (degree " << b["crDegree"].get<long>()
               << ")\n";
        os << "degree-2 twisted classes:";
        for (const auto& p : outs["degree2Twisted"]) os << " " << p.get<std::string>();
        os << "\n";
    }
    if (outs.contains("git")) {
        const json& g = outs["git"];
        os << "\nextended weight matrix (m=" << g["m"].get<int>() << ", w=" << g["w"].get<long>()
           << "):\n";
        for (const auto& row : g["weightMatrix"]) {
            os << "  [";
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i].get<long>();
            os << "]\n";
        }
        os << "multi-degrees:\n";
        for (const auto& row : g["multidegrees"]) {
            os << "  (";
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].get<long>();
            os << ")\n";
        }
    }
    if (outs.contains("mirrorMap") && outs["mirrorMap"].contains("forward")) {
        os << "\nmirror map:\n";
        for (const auto& f : outs["mirrorMap"]["forward"]) {
            os << "  " << f["var"].get<std::string>() << " =";
            bool first = true;
            for (const auto& t : f["terms"]) {
                os << (first ? " " : " + ") << "(" << t["value"].get<std::string>() << ")q^[";
                for (std::size_t i = 0; i < t["d"].size(); ++i)
                    os << (i ? "," : "") << t["d"][i].get<int>();
                os << "]";
                first = false;
            }
            os << "\n";
        }
    }
    if (outs.contains("invariants")) {
        const json& inv = outs["invariants"];
        os << "\ninvariants (" << inv.size() << " entries):\n";
        bool m1 = !inv.empty();
        long dmax = 0, kmax = 0;
        for (const auto& rec : inv) {
            if (rec["k"].size() != 1) m1 = false;
        }
        if (m1) {
            // d0 x d1 grid for a single extension class, as the tables are usually printed
            std::map<std::pair<long, long>, std::string> cells;
            for (const auto& rec : inv) {
                long d = rec["d"].get<long>(), k = rec["k"][0].get<int>();
                cells[{d, k}] = rec["value"].get<std::string>();
                dmax = std::max(dmax, d);
                kmax = std::max(kmax, k);
            }
            os << "  rows d0 (curve degree index), columns d1 (insertions):\n";
            for (long d = 0; d <= dmax; ++d) {
                os << "  d0=" << d << ":";
                for (long k = 0; k <= kmax; ++k) {
                    auto it = cells.find({d, k});
                    os << " " << (it == cells.end() ? "." : it->second);
                }
                os << "\n";
            }
        } else {
            for (const auto& rec : inv) {
                os << "  d=" << rec["d"].get<long>() << " k=[";
                for (std::size_t i = 0; i < rec["k"].size(); ++i)
                    os << (i ? "," : "") << rec["k"][i].get<int>();
                os << "] value=" << rec["value"].get<std::string>() << "\n";
            }
        }
    }
    if (outs.contains("crossChecks")) {
        os << "\nconsistency checks:\n";
        for (const auto& c : outs["crossChecks"])
            os << "  [" << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "] "
               << c["name"].get<std::string>() << ": " << c["detail"].get<std::string>() << "\n";
    }
    return os.str();
}

} // namespace pipeline_detail

inline std::string render(const json& body, const std::string& format) {
    if (format == "json") return pipeline_detail::render_json(body);
    if (format == "csv") return pipeline_detail::render_csv(body);
    if (format == "text") return pipeline_detail::render_text(body);
    throw StructuralError("unsupported format '" + format + "'");
}

// --- cache --------------------------------------------------------------

inline std::string cache_key(const RunConfig& cfg) {
    json key;
    key["config"] = config_echo(cfg);
    key["engineVersion"] = kEngineVersion;
    return fnv_hash_hex(key.dump());
}

inline std::string cache_path(const RunConfig& cfg) {
    return cfg.cache_dir + "/orbigw-" + cache_key(cfg) + ".json";
}

// Runs the pipeline with a read-through cache of the bundle bytes.
inline ResultBundle run_pipeline_cached(const RunConfig& cfg, bool use_cache = true) {
    if (use_cache && !cfg.cache_dir.empty()) {
        std::ifstream in(cache_path(cfg));
        if (in) {
            std::stringstream buf;
            buf << in.rdbuf();
            ResultBundle b;
            b.body = json::parse(buf.str());
            b.from_cache = true;
            return b;
        }
    }
    ResultBundle b = run_pipeline(cfg);
    if (use_cache && !cfg.cache_dir.empty()) {
        std::ofstream out(cache_path(cfg));
        if (out) out << b.body.dump(2) << "\n";
    }
    return b;
}

} // namespace orbigw

#endif
