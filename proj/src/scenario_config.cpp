#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>
#include <set>

#include <yaml-cpp/yaml.h>

#include "sqzdisp/io.hpp"
#include "sqzdisp/quantum_noise.hpp"
#include "sqzdisp/scenario.hpp"
#include "sqzdisp/units.hpp"

namespace sqzdisp::scenario {

using units::Dimension;
using Diagnostic = ConfigInvalid::Diagnostic;

namespace {

constexpr std::pair<Kind, std::string_view> kind_names[] = {
    {Kind::cavity_scan, "cavity_scan"}, {Kind::noise_floors, "noise_floors"}, {Kind::modulation, "modulation"},
    {Kind::ramp, "ramp"},               {Kind::correlation, "correlation"},   {Kind::sql_table, "sql_table"},
    {Kind::waist_opt, "waist_opt"},
};

// Walks a YAML tree, converting fields and collecting every problem
// instead of stopping at the first.
class Reader {
public:
    std::vector<Diagnostic> diags;

    void fail(const std::string& field, const std::string& message) { diags.push_back({field, message}); }

    // Reports keys of `node` not in `allowed`.
    void keys(const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> allowed) {
        if (!node.IsMap()) {
            fail(path.empty() ? "<root>" : path, "expected a mapping");
            return;
        }
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                fail(join(path, key), "unknown key");
        }
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    std::optional<std::string> scalar(const YAML::Node& parent, const std::string& path, const std::string& key) {
        const auto node = parent[key];
        if (!node) return std::nullopt;
        if (!node.IsScalar()) {
            fail(join(path, key), "expected a scalar");
            return std::nullopt;
        }
        return node.Scalar();
    }

    template <class T>
    void quantity(const YAML::Node& parent, const std::string& path, const std::string& key, Dimension dim, T& out) {
        const auto text = scalar(parent, path, key);
        if (!text) return;
        try {
            out = units::parse(*text, dim);
        } catch (const units::UnitError& e) {
            fail(join(path, key), e.what());
        }
    }

    void count(const YAML::Node& parent, const std::string& path, const std::string& key, int& out) {
        const auto text = scalar(parent, path, key);
        if (!text) return;
        try {
            out = units::parse_count(*text);
        } catch (const units::UnitError& e) {
            fail(join(path, key), e.what());
        }
    }

    void flag(const YAML::Node& parent, const std::string& path, const std::string& key, bool& out) {
        const auto text = scalar(parent, path, key);
        if (!text) return;
        if (*text == "true")
            out = true;
        else if (*text == "false")
            out = false;
        else
            fail(join(path, key), "expected true or false");
    }

    void mode(const YAML::Node& parent, const std::string& path, const std::string& key, ModeSpec& out) {
        const auto text = scalar(parent, path, key);
        if (!text) return;
        try {
            out = parse_mode(*text);
        } catch (const std::invalid_argument& e) {
            fail(join(path, key), e.what());
        }
    }

    bool required(const YAML::Node& parent, const std::string& path, const std::string& key) {
        if (parent[key]) return true;
        fail(join(path, key), "required");
        return false;
    }
};

Combination parse_combination(const std::string& s) {
    if (s == "a" || s == "Ia") return Combination::a;
    if (s == "b" || s == "Ib") return Combination::b;
    if (s == "c" || s == "Ic") return Combination::c;
    if (s == "d" || s == "Id") return Combination::d;
    throw std::invalid_argument("'" + s + "' is not a combination (a, b, c, d)");
}

void read_beam(Reader& r, const YAML::Node& n, BeamParams& beam) {
    r.keys(n, "beam", {"wavelength", "waist"});
    r.quantity(n, "beam", "wavelength", Dimension::length, beam.wavelength);
    r.quantity(n, "beam", "waist", Dimension::length, beam.waist);
}

void read_cavity(Reader& r, const YAML::Node& n, CavityConfig& c) {
    const std::string p = "cavity";
    r.keys(n, p, {"round_trip_length", "mirror_R", "roc_curved", "intracavity_loss", "finesse", "fsr", "gouy"});
    r.quantity(n, p, "round_trip_length", Dimension::length, c.round_trip_length);
    r.quantity(n, p, "roc_curved", Dimension::length, c.roc_curved);
    r.quantity(n, p, "intracavity_loss", Dimension::dimensionless, c.intracavity_loss);
    if (const auto m = n["mirror_R"]) {
        if (!m.IsSequence() || m.size() != 3) {
            r.fail(p + ".mirror_R", "expected a list of three reflectivities");
        } else {
            for (std::size_t i = 0; i < 3; ++i) {
                try {
                    c.mirror_R[i] = units::parse(m[i].Scalar(), Dimension::dimensionless);
                } catch (const units::UnitError& e) {
                    r.fail(p + ".mirror_R[" + std::to_string(i) + "]", e.what());
                }
            }
        }
    }
    if (n["finesse"]) {
        if (n["finesse"].Scalar() == "none") {
            c.finesse.reset();
        } else {
            double f = 0;
            r.quantity(n, p, "finesse", Dimension::dimensionless, f);
            c.finesse = f;
        }
    }
    if (n["fsr"]) {
        double f = 0;
        r.quantity(n, p, "fsr", Dimension::frequency, f);
        c.fsr = f;
    }
    if (n["gouy"]) {
        double g = 0;
        r.quantity(n, p, "gouy", Dimension::angle, g);
        c.gouy = g;
    }
}

void read_detector(Reader& r, const YAML::Node& n, Config& cfg) {
    const std::string p = "detector";
    r.keys(n, p, {"layout", "element_size", "gap", "split_axis", "include_loss"});
    auto& d = cfg.detector;
    if (const auto layout = r.scalar(n, p, "layout")) {
        if (*layout == "quadrant")
            d.layout = DetectorGeometry::Layout::quadrant;
        else if (*layout == "split")
            d.layout = DetectorGeometry::Layout::split;
        else
            r.fail(p + ".layout", "expected quadrant or split");
    }
    if (const auto size = r.scalar(n, p, "element_size"); size && *size == "infinite")
        d.element_size = std::numeric_limits<double>::infinity();
    else
        r.quantity(n, p, "element_size", Dimension::length, d.element_size);
    r.quantity(n, p, "gap", Dimension::length, d.gap);
    if (const auto axis = r.scalar(n, p, "split_axis")) {
        if (*axis == "horizontal")
            d.split_axis = Axis::horizontal;
        else if (*axis == "vertical")
            d.split_axis = Axis::vertical;
        else
            r.fail(p + ".split_axis", "expected horizontal or vertical");
    }
    r.flag(n, p, "include_loss", cfg.detector_loss);
}

void read_esa(Reader& r, const YAML::Node& n, EsaSettings& e) {
    const std::string p = "esa";
    r.keys(n, p, {"center", "span", "rbw", "vbw", "averages", "samples"});
    r.quantity(n, p, "center", Dimension::frequency, e.center_freq);
    r.quantity(n, p, "span", Dimension::frequency, e.span);
    r.quantity(n, p, "rbw", Dimension::frequency, e.rbw);
    r.quantity(n, p, "vbw", Dimension::frequency, e.vbw);
    r.count(n, p, "averages", e.averages);
    r.count(n, p, "samples", e.samples);
}

void read_squeezer(Reader& r, const YAML::Node& n, const std::string& p, Squeezer& s) {
    r.keys(n, p,
           {"label", "mode", "path", "quadrature", "source", "target_floor", "target_std_factor", "visibility",
            "cavity_efficiency", "enabled"});
    if (const auto label = r.scalar(n, p, "label")) s.label = *label;
    if (r.required(n, p, "mode")) r.mode(n, p, "mode", s.mode);
    if (const auto path = r.scalar(n, p, "path")) {
        if (*path == "transmit")
            s.path = Squeezer::Path::transmit;
        else if (*path == "reflect")
            s.path = Squeezer::Path::reflect;
        else if (*path == "direct")
            s.path = Squeezer::Path::direct;
        else
            r.fail(p + ".path", "expected transmit, reflect or direct");
    }
    if (const auto q = r.scalar(n, p, "quadrature")) {
        if (*q == "amplitude")
            s.quadrature = Squeezer::Quadrature::amplitude;
        else if (*q == "phase")
            s.quadrature = Squeezer::Quadrature::phase;
        else
            r.fail(p + ".quadrature", "expected amplitude or phase");
    }
    auto optional_quantity = [&](const char* key, Dimension dim, std::optional<double>& out) {
        if (!n[key]) return;
        double v = 0;
        const auto before = r.diags.size();
        r.quantity(n, p, key, dim, v);
        if (r.diags.size() == before) out = v;
    };
    optional_quantity("source", Dimension::decibel, s.source_db);
    optional_quantity("target_floor", Dimension::decibel, s.target_floor_db);
    optional_quantity("target_std_factor", Dimension::dimensionless, s.target_std_factor);
    optional_quantity("cavity_efficiency", Dimension::dimensionless, s.cavity_efficiency);
    r.quantity(n, p, "visibility", Dimension::dimensionless, s.visibility);
    r.flag(n, p, "enabled", s.enabled);
}

void read_measurement(Reader& r, const YAML::Node& n, const std::string& p, Measurement& m) {
    r.keys(n, p, {"label", "combination", "coherent_snr", "reported"});
    if (r.required(n, p, "label")) m.label = n["label"].Scalar();
    if (const auto c = r.scalar(n, p, "combination")) {
        try {
            m.combination = parse_combination(*c);
        } catch (const std::invalid_argument& e) {
            r.fail(p + ".combination", e.what());
        }
    }
    if (n["coherent_snr"]) {
        double v = 0;
        r.quantity(n, p, "coherent_snr", Dimension::dimensionless, v);
        m.coherent_snr = v;
    }
    if (const auto rep = n["reported"]) {
        if (!rep.IsMap()) {
            r.fail(p + ".reported", "expected a mapping of name: value");
        } else {
            for (const auto& kv : rep) {
                const auto key = kv.first.as<std::string>();
                const auto text = kv.second.Scalar();
                // Reported numbers keep whatever unit they were quoted in,
                // converted to SI (dB stays dB).
                std::optional<double> value;
                for (auto dim : {Dimension::decibel, Dimension::length, Dimension::dimensionless}) {
                    try {
                        value = units::parse(text, dim);
                        break;
                    } catch (const units::UnitError&) {
                    }
                }
                if (value)
                    m.reported.push_back({key, *value});
                else
                    r.fail(p + ".reported." + key, "'" + text + "' is not a dB, length or plain number");
            }
        }
    }
}

void read_scan(Reader& r, const YAML::Node& n, ScanSettings& s) {
    const std::string p = "scan";
    r.keys(n, p, {"incident", "phase_start", "phase_stop", "samples", "resolved_finesse", "resolved_samples"});
    r.mode(n, p, "incident", s.incident);
    r.quantity(n, p, "phase_start", Dimension::angle, s.phase_start);
    r.quantity(n, p, "phase_stop", Dimension::angle, s.phase_stop);
    r.count(n, p, "samples", s.samples);
    if (n["resolved_finesse"]) {
        double f = 0;
        r.quantity(n, p, "resolved_finesse", Dimension::dimensionless, f);
        s.resolved_finesse = f;
    }
    r.count(n, p, "resolved_samples", s.resolved_samples);
}

void read_ramp(Reader& r, const YAML::Node& n, RampSettings& s) {
    const std::string p = "ramp";
    r.keys(n, p, {"start", "stop", "anchor_displacement", "anchor_confidence", "confidences", "noise_samples"});
    r.quantity(n, p, "start", Dimension::length, s.start);
    r.quantity(n, p, "stop", Dimension::length, s.stop);
    r.quantity(n, p, "anchor_displacement", Dimension::length, s.anchor_displacement);
    r.quantity(n, p, "anchor_confidence", Dimension::dimensionless, s.anchor_confidence);
    r.count(n, p, "noise_samples", s.noise_samples);
    if (const auto c = n["confidences"]) {
        s.confidences.clear();
        if (!c.IsSequence()) r.fail(p + ".confidences", "expected a list");
        for (std::size_t i = 0; c.IsSequence() && i < c.size(); ++i) {
            try {
                s.confidences.push_back(units::parse(c[i].Scalar(), Dimension::dimensionless));
            } catch (const units::UnitError& e) {
                r.fail(p + ".confidences[" + std::to_string(i) + "]", e.what());
            }
        }
    }
}

void read_correlation(Reader& r, const YAML::Node& n, CorrelationSettings& s) {
    const std::string p = "correlation";
    r.keys(n, p, {"samples", "scatter_rows", "angles"});
    r.count(n, p, "samples", s.samples);
    r.count(n, p, "scatter_rows", s.scatter_rows);
    r.count(n, p, "angles", s.angles);
}

void read_sql(Reader& r, const YAML::Node& n, SqlSettings& s) {
    const std::string p = "sql";
    r.keys(n, p, {"photons", "numerical_aperture"});
    r.quantity(n, p, "numerical_aperture", Dimension::dimensionless, s.numerical_aperture);
    if (const auto ph = n["photons"]) {
        if (!ph.IsSequence()) r.fail(p + ".photons", "expected a list");
        for (std::size_t i = 0; ph.IsSequence() && i < ph.size(); ++i) {
            try {
                s.photons.push_back(units::parse(ph[i].Scalar(), Dimension::dimensionless));
            } catch (const units::UnitError& e) {
                r.fail(p + ".photons[" + std::to_string(i) + "]", e.what());
            }
        }
    }
}

void read_waist_scan(Reader& r, const YAML::Node& n, WaistScan& s) {
    const std::string p = "waist_scan";
    r.keys(n, p, {"start", "stop", "samples", "reference_waist"});
    r.quantity(n, p, "start", Dimension::length, s.start);
    r.quantity(n, p, "stop", Dimension::length, s.stop);
    r.count(n, p, "samples", s.samples);
    r.quantity(n, p, "reference_waist", Dimension::length, s.reference_waist);
}

}  // namespace

std::string_view kind_name(Kind kind) {
    for (const auto& [k, name] : kind_names)
        if (k == kind) return name;
    return "?";
}

ModeSpec parse_mode(const std::string& text) {
    static const std::regex tem(R"(TEM(f?)([0-9])(f?)([0-9]))");
    static const std::regex hg(R"(HG\((f?)([0-9]+),\s*(f?)([0-9]+)\))");
    std::smatch m;
    if (std::regex_match(text, m, tem) || std::regex_match(text, m, hg)) {
        const int mi = std::stoi(m[2].str());
        const int ni = std::stoi(m[4].str());
        if (mi > 60 || ni > 60) throw std::invalid_argument("mode '" + text + "': index above 60");
        const FlipSet flips{m[1].length() > 0, m[3].length() > 0};
        return flips.empty() ? ModeSpec::hg(mi, ni) : ModeSpec::flipped(ModeSpec::hg(mi, ni), flips);
    }
    throw std::invalid_argument("'" + text + "' is not a mode (TEMf00, TEM11, HG(f3,1), ...)");
}

Config parse(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigInvalid(std::vector<ConfigInvalid::Diagnostic>{{"<yaml>", e.what()}});
    }
    Reader r;
    Config cfg;
    cfg.source_text = yaml_text;
    r.keys(root, "",
           {"id", "description", "kind", "seed", "beam", "mean_mode", "mean_visibility", "power", "squeezers",
            "cavity", "beamsplitter_reflectivity", "detector", "esa", "measurements", "modulation_frequency", "scan",
            "ramp", "correlation", "sql", "waist_scan", "outputs"});
    if (!root.IsMap()) throw ConfigInvalid(std::move(r.diags));

    if (r.required(root, "", "id")) cfg.id = root["id"].Scalar();
    if (!cfg.id.empty() && !std::regex_match(cfg.id, std::regex("[A-Za-z0-9_]+")))
        r.fail("id", "use letters, digits and underscores only");
    if (root["description"]) cfg.description = root["description"].Scalar();
    if (r.required(root, "", "kind")) {
        const auto k = root["kind"].Scalar();
        bool found = false;
        for (const auto& [kind, name] : kind_names)
            if (name == k) {
                cfg.kind = kind;
                found = true;
            }
        if (!found) r.fail("kind", "unknown kind '" + k + "'");
    }
    if (const auto seed = r.scalar(root, "", "seed")) {
        const char* end = seed->data() + seed->size();
        const auto [ptr, ec] = std::from_chars(seed->data(), end, cfg.seed);
        if (ec != std::errc() || ptr != end || seed->empty()) r.fail("seed", "expected a non-negative integer");
    }
    if (root["beam"]) read_beam(r, root["beam"], cfg.beam);
    r.mode(root, "", "mean_mode", cfg.mean_mode);
    r.quantity(root, "", "mean_visibility", Dimension::dimensionless, cfg.mean_visibility);
    r.quantity(root, "", "power", Dimension::power, cfg.power);
    if (const auto sq = root["squeezers"]) {
        if (!sq.IsSequence()) r.fail("squeezers", "expected a list");
        for (std::size_t i = 0; sq.IsSequence() && i < sq.size(); ++i) {
            Squeezer s;
            read_squeezer(r, sq[i], "squeezers[" + std::to_string(i) + "]", s);
            if (s.label.empty()) s.label = "squeezer" + std::to_string(i);
            cfg.squeezers.push_back(s);
        }
    }
    if (root["cavity"]) read_cavity(r, root["cavity"], cfg.cavity);
    r.quantity(root, "", "beamsplitter_reflectivity", Dimension::dimensionless, cfg.beamsplitter_reflectivity);
    if (root["detector"]) read_detector(r, root["detector"], cfg);
    if (root["esa"]) read_esa(r, root["esa"], cfg.esa);
    if (const auto ms = root["measurements"]) {
        if (!ms.IsSequence()) r.fail("measurements", "expected a list");
        for (std::size_t i = 0; ms.IsSequence() && i < ms.size(); ++i) {
            Measurement m;
            read_measurement(r, ms[i], "measurements[" + std::to_string(i) + "]", m);
            cfg.measurements.push_back(m);
        }
    }
    r.quantity(root, "", "modulation_frequency", Dimension::frequency, cfg.modulation_frequency);
    if (root["scan"]) read_scan(r, root["scan"], cfg.scan);
    if (root["ramp"]) read_ramp(r, root["ramp"], cfg.ramp);
    if (root["correlation"]) read_correlation(r, root["correlation"], cfg.correlation);
    if (root["sql"]) read_sql(r, root["sql"], cfg.sql);
    if (root["waist_scan"]) read_waist_scan(r, root["waist_scan"], cfg.waist_scan);
    if (const auto out = root["outputs"]) {
        if (!out.IsSequence()) r.fail("outputs", "expected a list of output names");
        for (std::size_t i = 0; out.IsSequence() && i < out.size(); ++i) cfg.outputs.push_back(out[i].Scalar());
    }

    if (!r.diags.empty()) throw ConfigInvalid(std::move(r.diags));
    return cfg;
}

Config load(const std::filesystem::path& path) { return parse(io::read_file(path)); }

std::vector<Diagnostic> validate(const Config& cfg) {
    std::vector<Diagnostic> d;
    auto check = [&](bool ok, const std::string& field, const std::string& message) {
        if (!ok) d.push_back({field, message});
    };
    auto guarded = [&](const std::string& field, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            d.push_back({field, e.what()});
        }
    };
    auto fraction = [&](double v, const std::string& field, bool open_low) {
        check(open_low ? (v > 0.0 && v <= 1.0) : (v >= 0.0 && v <= 1.0), field,
              open_low ? "must lie in (0, 1]" : "must lie in [0, 1]");
    };

    guarded("beam", [&] { cfg.beam.validate(); });
    check(cfg.beam.waist_z == 0.0, "beam", "modes are evaluated at the waist");
    check(cfg.beamsplitter_reflectivity > 0.0 && cfg.beamsplitter_reflectivity < 1.0, "beamsplitter_reflectivity",
          "must lie in (0, 1)");
    fraction(cfg.mean_visibility, "mean_visibility", false);
    check(cfg.power > 0.0, "power", "must be positive");
    guarded("cavity", [&] {
        cfg.cavity.validate();
        (void)round_trip_gouy(cfg.cavity);
    });
    guarded("detector", [&] { cfg.detector.validate(); });

    const bool needs_field = cfg.kind == Kind::noise_floors || cfg.kind == Kind::modulation || cfg.kind == Kind::ramp ||
                             cfg.kind == Kind::correlation;
    const bool needs_esa = cfg.kind == Kind::noise_floors || cfg.kind == Kind::modulation || cfg.kind == Kind::ramp;

    std::set<std::string> labels;
    for (std::size_t i = 0; i < cfg.squeezers.size(); ++i) {
        const auto& s = cfg.squeezers[i];
        const auto p = "squeezers[" + std::to_string(i) + "]";
        check(labels.insert(s.label).second, p + ".label", "duplicate label '" + s.label + "'");
        const int set = (s.source_db ? 1 : 0) + (s.target_floor_db ? 1 : 0) + (s.target_std_factor ? 1 : 0);
        check(set == 1, p, "give exactly one of source, target_floor, target_std_factor");
        fraction(s.visibility, p + ".visibility", false);
        if (s.cavity_efficiency) fraction(*s.cavity_efficiency, p + ".cavity_efficiency", false);
        if (s.target_std_factor) check(*s.target_std_factor > 0.0, p + ".target_std_factor", "must be positive");
        check(s.path != Squeezer::Path::reflect || s.mode.is_flipped() || s.mode.order() > 0, p + ".path",
              "a TEM00 squeezer cannot be reflected off a cavity locked to TEM00");
    }
    labels.clear();
    for (std::size_t i = 0; i < cfg.measurements.size(); ++i) {
        const auto& m = cfg.measurements[i];
        const auto p = "measurements[" + std::to_string(i) + "]";
        check(labels.insert(m.label).second, p + ".label", "duplicate label '" + m.label + "'");
        check(std::regex_match(m.label, std::regex("[A-Za-z0-9_]+")), p + ".label",
              "use letters, digits and underscores only");
        if (cfg.kind == Kind::modulation)
            check(m.coherent_snr && *m.coherent_snr > 0.0, p + ".coherent_snr", "required and positive for modulation");
    }

    if (needs_field) {
        // The mean mode and every squeezer mode must be mutually orthogonal.
        std::vector<ModeSpec> modes{cfg.mean_mode};
        for (const auto& s : cfg.squeezers) modes.push_back(s.mode);
        guarded("squeezers", [&] { check_orthogonal(modes, cfg.beam); });
        check(!cfg.measurements.empty(), "measurements", "at least one measurement is required");
    }
    if (needs_esa) guarded("esa", [&] { cfg.esa.validate(); });

    switch (cfg.kind) {
        case Kind::cavity_scan:
            check(cfg.scan.incident.is_flipped(), "scan.incident", "must be a flipped mode");
            check(cfg.scan.phase_stop > cfg.scan.phase_start, "scan.phase_stop", "must exceed phase_start");
            check(cfg.scan.samples >= 2, "scan.samples", "need at least 2");
            check(cfg.scan.resolved_samples >= 2, "scan.resolved_samples", "need at least 2");
            if (cfg.scan.resolved_finesse)
                check(*cfg.scan.resolved_finesse > 0.0, "scan.resolved_finesse", "must be positive");
            break;
        case Kind::noise_floors:
            break;
        case Kind::modulation:
            check(!cfg.esa.zero_span(), "esa.span", "modulation needs a swept trace");
            check(cfg.modulation_frequency > 0.0, "modulation_frequency", "must be positive");
            break;
        case Kind::ramp:
            check(cfg.esa.zero_span(), "esa.span", "ramp needs zero span");
            check(cfg.measurements.size() == 1, "measurements", "ramp takes exactly one measurement");
            check(cfg.ramp.stop > cfg.ramp.start && cfg.ramp.start >= 0.0, "ramp.stop", "need 0 <= start < stop");
            check(cfg.ramp.anchor_displacement > 0.0, "ramp.anchor_displacement", "must be positive");
            check(cfg.ramp.anchor_confidence > 0.0 && cfg.ramp.anchor_confidence < 1.0, "ramp.anchor_confidence",
                  "must lie in (0, 1)");
            check(!cfg.ramp.confidences.empty(), "ramp.confidences", "need at least one");
            for (double c : cfg.ramp.confidences) check(c > 0.0 && c < 1.0, "ramp.confidences", "must lie in (0, 1)");
            check(cfg.ramp.noise_samples >= 1000, "ramp.noise_samples", "need at least 1000");
            break;
        case Kind::correlation:
            check(cfg.measurements.size() == 2, "measurements", "correlation takes exactly two measurements");
            check(cfg.correlation.samples >= 100, "correlation.samples", "need at least 100");
            check(cfg.correlation.scatter_rows >= 1 && cfg.correlation.scatter_rows <= cfg.correlation.samples,
                  "correlation.scatter_rows", "must lie in [1, samples]");
            check(cfg.correlation.angles >= 2, "correlation.angles", "need at least 2");
            break;
        case Kind::sql_table:
            check(!cfg.sql.photons.empty(), "sql.photons", "need at least one photon number");
            for (double n : cfg.sql.photons) check(n >= 1.0, "sql.photons", "photon numbers must be >= 1");
            check(cfg.sql.numerical_aperture > 0.0 && cfg.sql.numerical_aperture <= 1.0, "sql.numerical_aperture",
                  "must lie in (0, 1]");
            break;
        case Kind::waist_opt:
            check(cfg.waist_scan.stop > cfg.waist_scan.start && cfg.waist_scan.start > 0.0, "waist_scan.stop",
                  "need 0 < start < stop");
            check(cfg.waist_scan.samples >= 2, "waist_scan.samples", "need at least 2");
            check(cfg.waist_scan.reference_waist > 0.0, "waist_scan.reference_waist", "must be positive");
            break;
    }

    // Targets must be reachable through the efficiency chain.
    if (d.empty() && needs_field) guarded("squeezers", [&] { (void)squeezer_budgets(cfg); });
    return d;
}

Config builtin(const std::string& id) {
    for (const auto& e : catalog())
        if (e.id == id) return parse(e.yaml);
    throw std::out_of_range("no built-in scenario '" + id + "'");
}

const OutputFile& Result::file(const std::string& name) const {
    for (const auto& f : files)
        if (f.name == name) return f;
    throw std::out_of_range("scenario " + id + " has no output '" + name + "'");
}

}  // namespace sqzdisp::scenario
