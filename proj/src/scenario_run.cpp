#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sqzdisp/constants.hpp"
#include "sqzdisp/esa_model.hpp"
#include "sqzdisp/io.hpp"
#include "sqzdisp/quantum_noise.hpp"
#include "sqzdisp/rng.hpp"
#include "sqzdisp/scenario.hpp"

#ifndef SQZDISP_VERSION
#define SQZDISP_VERSION "unknown"
#endif

namespace sqzdisp::scenario {

namespace {

using io::format_double;

constexpr double two_pi = 2.0 * constants::pi;

std::string conf_key(double c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", c);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

ExpansionCoefficients expansion_of(const ModeSpec& mode, const BeamParams& beam, int max_order, Exec exec) {
    if (mode.is_flipped()) return expand_flipped(mode, beam, max_order, exec);
    ExpansionCoefficients e(std::max(max_order, mode.order()));
    e.set(mode.m(), mode.n(), 1.0);
    return e;
}

// Cavity efficiency seen by a squeezer, averaged over the upper and lower
// sidebands at the analysis frequency.
double modelled_cavity_efficiency(const Config& cfg, const Squeezer& s, int max_order, Exec exec) {
    const double phi = two_pi * cfg.esa.center_freq / cfg.cavity.free_spectral_range();
    switch (s.path) {
        case Squeezer::Path::direct:
            return 1.0;
        case Squeezer::Path::transmit:
            return 0.5 * (family_lineshape(cfg.cavity, s.mode.order(), phi).t +
                          family_lineshape(cfg.cavity, s.mode.order(), -phi).t);
        case Squeezer::Path::reflect: {
            const auto e = expansion_of(s.mode, cfg.beam, max_order, exec);
            return 0.5 * (combination_efficiency(cfg.cavity, ModeSpec::tem00(), e, phi).eta_refl_total +
                          combination_efficiency(cfg.cavity, ModeSpec::tem00(), e, -phi).eta_refl_total);
        }
    }
    return 1.0;
}

double detector_efficiency(const Config& cfg) {
    return cfg.detector_loss ? 1.0 - detector_loss(cfg.beam, cfg.detector) : 1.0;
}

double mean_photons(const Config& cfg) {
    const double p = cfg.power * (1.0 - cfg.beamsplitter_reflectivity) *
                     visibility_to_efficiency(cfg.mean_visibility) * detector_efficiency(cfg);
    return photons_per_measurement(p, optical_frequency(cfg.beam.wavelength), cfg.esa.rbw);
}

MultimodeField build_field(const Config& cfg, const std::vector<SqueezerBudget>& budgets, double photons) {
    std::vector<ModeState> states{ModeState::coherent(cfg.mean_mode, photons)};
    for (std::size_t i = 0; i < cfg.squeezers.size(); ++i) {
        const auto& s = cfg.squeezers[i];
        if (!s.enabled) {
            states.push_back(ModeState::vacuum(s.mode));
            continue;
        }
        const auto& b = budgets[i];
        const double chain[] = {b.eta_waveplate, b.eta_cavity, b.eta_beamsplitter, b.eta_detector};
        ModeState st{s.mode, {}, b.delivered_var, propagate_variance(1.0 / b.source_var, chain)};
        states.push_back(st);
    }
    return MultimodeField(cfg.beam, std::move(states));
}

struct Context {
    const Config& cfg;
    std::uint64_t seed;
    int max_order;
    Exec exec;
    Result& out;

    std::uint64_t stream(const std::string& label) const { return rng::split(seed, rng::label_hash(label)); }

    void add_file(const std::string& name, std::string content) {
        out.files.push_back({name, cfg.id + "_" + name + ".csv", std::move(content)});
    }
    void add_trace(const std::string& name, const SpectrumTrace& t) { add_file(name, io::trace_csv(t)); }
};

void add_reported(io::Summary& s, const Measurement& m) {
    for (const auto& r : m.reported) s.add(m.label + ".reported." + r.name, r.value);
}

void add_budgets(io::Summary& s, const Config& cfg, const std::vector<SqueezerBudget>& budgets) {
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        const auto& b = budgets[i];
        const auto p = "squeezer." + b.label + ".";
        s.add(p + "mode", cfg.squeezers[i].mode.label());
        s.add(p + "enabled", cfg.squeezers[i].enabled ? "true" : "false");
        s.add(p + "eta_waveplate", b.eta_waveplate);
        s.add(p + "eta_cavity", b.eta_cavity);
        s.add(p + "eta_beamsplitter", b.eta_beamsplitter);
        s.add(p + "eta_detector", b.eta_detector);
        s.add(p + "eta_total", b.eta_total);
        s.add(p + "source_db", to_db(b.source_var));
        s.add(p + "delivered_db", to_db(b.delivered_var));
    }
}

// Noise floor trace of one measurement in QNL units.
SpectrumTrace floor_trace(const Context& ctx, double var, double d_noise, const std::string& label) {
    const auto seed = ctx.stream(label);
    const auto t = ctx.cfg.esa.zero_span()
                       ? generate_ramp_trace(var, d_noise, Ramp{}, ctx.cfg.esa, seed, ctx.exec)
                       : generate_spectrum_trace(var, d_noise, std::nullopt, ctx.cfg.esa, seed, ctx.exec);
    return to_qnl_units(t, d_noise);
}

void run_noise_floors(Context& ctx) {
    const auto& cfg = ctx.cfg;
    auto& s = ctx.out.summary;
    const auto budgets = squeezer_budgets(cfg, ctx.max_order, ctx.exec);
    const double photons = mean_photons(cfg);
    const auto field = build_field(cfg, budgets, photons);
    const double d_sql = sql_displacement(photons, cfg.beam.waist);

    s.add("mean_mode", cfg.mean_mode.label());
    s.add("photons_per_interval", photons);
    s.add("d_sql_m", d_sql);
    add_budgets(s, cfg, budgets);

    const auto qnl = floor_trace(ctx, 1.0, d_sql, "qnl");
    const double qnl_mean = mean_of(qnl.values);
    s.add("qnl.trace_mean", qnl_mean);
    ctx.add_trace("qnl", qnl);

    for (const auto& m : cfg.measurements) {
        const auto flip = measurement_flip(cfg.mean_mode, m.combination);
        const double var = differential_noise_variance(field, flip);
        const auto t = floor_trace(ctx, var, d_sql, m.label);
        const double mean = mean_of(t.values);
        const auto p = m.label + ".";
        s.add(p + "noise_mode", flip.label());
        s.add(p + "predicted_var", var);
        s.add(p + "predicted_db", to_db(var));
        s.add(p + "trace_mean", mean);
        s.add(p + "trace_mean_db", to_db(mean));
        s.add(p + "trace_vs_qnl_db", to_db(mean / qnl_mean));
        add_reported(s, m);
        ctx.add_trace(m.label, t);
    }
}

void run_modulation(Context& ctx) {
    const auto& cfg = ctx.cfg;
    auto& s = ctx.out.summary;
    const auto budgets = squeezer_budgets(cfg, ctx.max_order, ctx.exec);
    const double photons = mean_photons(cfg);
    const auto field = build_field(cfg, budgets, photons);
    const double d_sql = sql_displacement(photons, cfg.beam.waist);

    s.add("mean_mode", cfg.mean_mode.label());
    s.add("photons_per_interval", photons);
    s.add("d_sql_m", d_sql);
    s.add("modulation_frequency_hz", cfg.modulation_frequency);
    add_budgets(s, cfg, budgets);

    for (const auto& m : cfg.measurements) {
        const auto flip = measurement_flip(cfg.mean_mode, m.combination);
        const double var = differential_noise_variance(field, flip);
        // Tone scaled so the coherent peak-to-floor ratio is the configured SNR.
        const Tone tone{cfg.modulation_frequency, std::sqrt(*m.coherent_snr) * d_sql};
        const auto coh = to_qnl_units(
            generate_spectrum_trace(1.0, d_sql, tone, cfg.esa, ctx.stream(m.label + "/coherent"), ctx.exec), d_sql);
        const auto sqz = to_qnl_units(
            generate_spectrum_trace(var, d_sql, tone, cfg.esa, ctx.stream(m.label + "/squeezed"), ctx.exec), d_sql);
        const auto fit_coh = fit_tone(coh, tone.frequency);
        const auto fit_sqz = fit_tone(sqz, tone.frequency);
        const double improvement = fit_sqz.snr() / fit_coh.snr();
        const double model = snr_improvement(var);
        const auto p = m.label + ".";
        s.add(p + "noise_mode", flip.label());
        s.add(p + "predicted_var", var);
        s.add(p + "predicted_db", to_db(var));
        s.add(p + "d_mod_m", tone.d_mod);
        s.add(p + "snr_coherent", fit_coh.snr());
        s.add(p + "snr_squeezed", fit_sqz.snr());
        s.add(p + "improvement", improvement);
        s.add(p + "improvement_model", model);
        s.add(p + "improvement_rel_error", improvement / model - 1.0);
        add_reported(s, m);
        ctx.add_trace(m.label + "_coherent", coh);
        ctx.add_trace(m.label + "_squeezed", sqz);
    }
}

void run_ramp(Context& ctx) {
    const auto& cfg = ctx.cfg;
    auto& s = ctx.out.summary;
    const auto budgets = squeezer_budgets(cfg, ctx.max_order, ctx.exec);
    const auto field = build_field(cfg, budgets, 1.0);
    const auto& m = cfg.measurements.front();
    const auto flip = measurement_flip(cfg.mean_mode, m.combination);
    const double var = differential_noise_variance(field, flip);

    const int k = cfg.esa.effective_averages();
    const double d_noise = calibrate_noise_floor(cfg.ramp.anchor_displacement, cfg.ramp.anchor_confidence, k);
    const double duration = cfg.esa.samples / cfg.esa.vbw;
    const Ramp profile{(cfg.ramp.stop - cfg.ramp.start) / duration, cfg.ramp.start};
    EsaSettings noise_settings = cfg.esa;
    noise_settings.samples = cfg.ramp.noise_samples;

    // Both beams read the same analyser noise realization.
    const auto noise_seed = ctx.stream("noise_only");
    const auto ramp_seed = ctx.stream("ramp");
    auto make_run = [&](double v) {
        return RampRun{generate_ramp_trace(v, d_noise, Ramp{}, noise_settings, noise_seed, ctx.exec),
                       generate_ramp_trace(v, d_noise, profile, cfg.esa, ramp_seed, ctx.exec), profile};
    };
    const auto coh = make_run(1.0);
    const auto sqz = make_run(var);

    s.add("noise_mode", flip.label());
    s.add("predicted_var", var);
    s.add("predicted_db", to_db(var));
    s.add("effective_averages", static_cast<double>(k));
    s.add("d_noise_coherent_m", d_noise);
    s.add("ramp_rate_m_per_s", profile.rate);
    s.add("improvement_model", 1.0 / std::sqrt(var));
    add_budgets(s, cfg, budgets);
    const auto fit_coh = fit_ramp(coh);
    const auto fit_sqz = fit_ramp(sqz);
    s.add("coherent.alpha_m2", fit_coh.alpha);
    s.add("coherent.beta", fit_coh.beta);
    s.add("squeezed.alpha_m2", fit_sqz.alpha);
    s.add("squeezed.beta", fit_sqz.beta);
    for (double c : cfg.ramp.confidences) {
        const auto md = min_detectable(sqz, coh, c);
        const auto p = "confidence_" + conf_key(c) + ".";
        s.add(p + "d_min_coherent_m", md.d_min_coh);
        s.add(p + "d_min_squeezed_m", md.d_min_sqz);
        s.add(p + "improvement", md.improvement);
    }
    add_reported(s, m);
    ctx.add_trace("ramp_coherent", coh.ramp);
    ctx.add_trace("ramp_squeezed", sqz.ramp);
}

void run_correlation(Context& ctx) {
    const auto& cfg = ctx.cfg;
    auto& s = ctx.out.summary;
    const auto budgets = squeezer_budgets(cfg, ctx.max_order, ctx.exec);
    const auto field = build_field(cfg, budgets, 1.0);
    const auto n = static_cast<std::size_t>(cfg.correlation.samples);
    const auto& mh = cfg.measurements[0];
    const auto& mv = cfg.measurements[1];
    const double var_h = differential_noise_variance(field, measurement_flip(cfg.mean_mode, mh.combination));
    const double var_v = differential_noise_variance(field, measurement_flip(cfg.mean_mode, mv.combination));

    // Amplitude quadrature samples per beam and axis, each axis from its own stream.
    auto draw = [&](const std::string& label, double var) {
        rng::Stream st(ctx.stream(label));
        std::vector<double> x(n);
        const double sd = std::sqrt(var);
        for (auto& v : x) v = sd * st.normal();
        return x;
    };
    auto stddev = [](const std::vector<double>& x) {
        const double m = mean_of(x);
        double ss = 0.0;
        for (double v : x) ss += (v - m) * (v - m);
        return std::sqrt(ss / static_cast<double>(x.size() - 1));
    };
    auto correlation = [&](const std::vector<double>& a, const std::vector<double>& b) {
        const double ma = mean_of(a), mb = mean_of(b);
        double sab = 0, saa = 0, sbb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            sab += (a[i] - ma) * (b[i] - mb);
            saa += (a[i] - ma) * (a[i] - ma);
            sbb += (b[i] - mb) * (b[i] - mb);
        }
        return sab / std::sqrt(saa * sbb);
    };

    auto coh_h = draw("coherent/" + mh.label, 1.0);
    auto coh_v = draw("coherent/" + mv.label, 1.0);
    auto sqz_h = draw("squeezed/" + mh.label, var_h);
    auto sqz_v = draw("squeezed/" + mv.label, var_v);
    // Rescale so the coherent standard deviation is one on each axis.
    const double scale_h = stddev(coh_h), scale_v = stddev(coh_v);
    for (auto* x : {&coh_h, &sqz_h})
        for (auto& v : *x) v /= scale_h;
    for (auto* x : {&coh_v, &sqz_v})
        for (auto& v : *x) v /= scale_v;

    const double f_h = stddev(sqz_h), f_v = stddev(sqz_v);
    s.add(mh.label + ".noise_mode", measurement_flip(cfg.mean_mode, mh.combination).label());
    s.add(mh.label + ".predicted_factor", std::sqrt(var_h));
    s.add(mh.label + ".std_factor", f_h);
    s.add(mh.label + ".var_db", to_db(f_h * f_h));
    s.add(mv.label + ".noise_mode", measurement_flip(cfg.mean_mode, mv.combination).label());
    s.add(mv.label + ".predicted_factor", std::sqrt(var_v));
    s.add(mv.label + ".std_factor", f_v);
    s.add(mv.label + ".var_db", to_db(f_v * f_v));
    s.add("correlation_coherent", correlation(coh_h, coh_v));
    s.add("correlation_squeezed", correlation(sqz_h, sqz_v));
    s.add("correlation_bound", 3.0 / std::sqrt(static_cast<double>(n)));
    s.add("samples", static_cast<double>(n));
    add_budgets(s, cfg, budgets);
    add_reported(s, mh);
    add_reported(s, mv);

    auto scatter = [&](const std::vector<double>& h, const std::vector<double>& v) {
        io::Table t;
        t.columns = {mh.label, mv.label};
        for (int i = 0; i < cfg.correlation.scatter_rows; ++i)
            t.add_row({format_double(h[static_cast<std::size_t>(i)]), format_double(v[static_cast<std::size_t>(i)])});
        return io::table_csv(t);
    };
    ctx.add_file("scatter_coherent", scatter(coh_h, coh_v));
    ctx.add_file("scatter_squeezed", scatter(sqz_h, sqz_v));

    io::Table ellipse;
    ellipse.columns = {"angle_rad", "std_coherent", "std_squeezed"};
    for (int j = 0; j < cfg.correlation.angles; ++j) {
        const double th = constants::pi * j / cfg.correlation.angles;
        const double c = std::cos(th), sn = std::sin(th);
        std::vector<double> pc(n), ps(n);
        for (std::size_t i = 0; i < n; ++i) {
            pc[i] = c * coh_h[i] + sn * coh_v[i];
            ps[i] = c * sqz_h[i] + sn * sqz_v[i];
        }
        ellipse.add_row({format_double(th), format_double(stddev(pc)), format_double(stddev(ps))});
    }
    ctx.add_file("ellipse", io::table_csv(ellipse));
}

void run_sql_table(Context& ctx) {
    const auto& cfg = ctx.cfg;
    io::Table t;
    t.columns = {"photons", "d_sql_m", "d_focused_m"};
    for (double n : cfg.sql.photons)
        t.add_row({format_double(n), format_double(sql_displacement(n, cfg.beam.waist)),
                   format_double(sql_focused(n, cfg.beam.wavelength, cfg.sql.numerical_aperture))});
    ctx.add_file("table", io::table_csv(t));
    auto& s = ctx.out.summary;
    s.add("waist_m", cfg.beam.waist);
    s.add("wavelength_m", cfg.beam.wavelength);
    s.add("numerical_aperture", cfg.sql.numerical_aperture);
    s.add("focused_waist_m", cfg.beam.wavelength / (2.0 * cfg.sql.numerical_aperture));
}

void run_waist_opt(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto& w = cfg.waist_scan;
    SpectrumTrace t;
    t.axis.resize(static_cast<std::size_t>(w.samples));
    t.values.resize(t.axis.size());
    t.axis_unit = "m";
    t.value_unit = "fraction";
    t.settings.rbw = 0.0;
    t.settings.vbw = 0.0;
    t.settings.samples = w.samples;
    auto point = [&](int i) {
        BeamParams b = cfg.beam;
        b.waist = w.start + (w.stop - w.start) * i / (w.samples - 1);
        t.axis[static_cast<std::size_t>(i)] = b.waist;
        t.values[static_cast<std::size_t>(i)] = detector_loss(b, cfg.detector);
    };
    if (ctx.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (int i = 0; i < w.samples; ++i) point(i);
    } else {
        for (int i = 0; i < w.samples; ++i) point(i);
    }
    ctx.add_trace("loss_scan", t);

    const auto opt = optimize_waist(cfg.detector, cfg.beam.wavelength);
    BeamParams ref = cfg.beam;
    ref.waist = w.reference_waist;
    auto& s = ctx.out.summary;
    s.add("element_size_m", cfg.detector.element_size);
    s.add("gap_m", cfg.detector.gap);
    s.add("optimal_waist_m", opt.waist);
    s.add("min_loss", opt.min_loss);
    s.add("boundary_hit", opt.boundary_hit ? "true" : "false");
    s.add("reference_waist_m", w.reference_waist);
    s.add("reference_loss", detector_loss(ref, cfg.detector));
}

struct DipRow {
    Dip nominal;
    std::optional<Dip> resolved;
};

void run_cavity_scan(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto& sc = cfg.scan;
    auto& s = ctx.out.summary;
    const int half = ctx.max_order / 2;
    const auto full = expand_flipped(sc.incident, cfg.beam, ctx.max_order, ctx.exec);
    const auto incident = full.truncated(half, half);

    const auto scan = scan_reflection(cfg.cavity, incident, sc.phase_start, sc.phase_stop, sc.samples, ctx.exec);
    const auto dips = analyze_dips(scan, cfg.cavity, incident);
    ctx.add_trace("scan", scan);

    std::vector<Dip> resolved;
    CavityConfig sharp = cfg.cavity;
    if (sc.resolved_finesse) {
        sharp.finesse = *sc.resolved_finesse;
        const auto r = scan_reflection(sharp, incident, sc.phase_start, sc.phase_stop, sc.resolved_samples, ctx.exec);
        resolved = analyze_dips(r, sharp, incident);
        ctx.add_trace("scan_resolved", r);
    }

    const double r_off = off_resonance_reflection(cfg.cavity);
    const double r_off_sharp = off_resonance_reflection(sharp);
    io::Table table;
    table.columns = {"order",      "phase_rad",           "weight",          "depth", "depth_ratio", "crosstalk",
                     "isolated",   "resolved_depth_ratio", "resolved_crosstalk", "resolved_isolated"};
    int deepest = -1;
    double deepest_depth = -1.0;
    double worst_nominal = 0.0, worst_resolved = 0.0;
    int isolated_nominal = 0, isolated_resolved = 0;
    bool monotonic = true;
    double prev_depth = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dips.size(); ++i) {
        const auto& d = dips[i];
        const double ratio = d.depth / (d.weight * r_off);
        if (d.depth > deepest_depth) {
            deepest_depth = d.depth;
            deepest = d.order;
        }
        if (d.isolated) {
            ++isolated_nominal;
            worst_nominal = std::max(worst_nominal, std::abs(ratio - 1.0));
        }
        std::vector<std::string> row{std::to_string(d.order), format_double(d.phase), format_double(d.weight),
                                     format_double(d.depth), format_double(ratio),    format_double(d.crosstalk),
                                     d.isolated ? "1" : "0"};
        if (i < resolved.size()) {
            const auto& r = resolved[i];
            const double rr = r.depth / (r.weight * r_off_sharp);
            // Only isolated dips have a measurable depth.
            if (r.isolated) {
                ++isolated_resolved;
                worst_resolved = std::max(worst_resolved, std::abs(rr - 1.0));
                if (!(r.depth < prev_depth)) monotonic = false;
                prev_depth = r.depth;
            }
            row.insert(row.end(), {format_double(rr), format_double(r.crosstalk), r.isolated ? "1" : "0"});
        } else {
            row.insert(row.end(), {"", "", ""});
        }
        table.add_row(std::move(row));
    }
    ctx.add_file("dips", io::table_csv(table));

    const double psi = round_trip_gouy(cfg.cavity);
    CavityConfig mirrors = cfg.cavity;
    mirrors.finesse.reset();
    const double fwhm = two_pi / cfg.cavity.finesse_value();
    double nearest = std::numeric_limits<double>::infinity();
    for (int N = 1; N < 18; ++N) {
        const double ph = family_resonance(cfg.cavity, N);
        nearest = std::min(nearest, std::min(ph, two_pi - ph) / fwhm);
    }
    const auto eff = combination_efficiency(cfg.cavity, ModeSpec::tem00(), full);
    const auto eff_sq = combination_efficiency(cfg.cavity, ModeSpec::tem00(), incident);

    s.add("incident_mode", sc.incident.label());
    s.add("max_order", static_cast<double>(ctx.max_order));
    s.add("gouy_rad", psi);
    s.add("finesse", cfg.cavity.finesse_value());
    s.add("finesse_from_mirrors", mirrors.finesse_value());
    s.add("fsr_hz", cfg.cavity.free_spectral_range());
    s.add("linewidth_fwhm_hz", cfg.cavity.linewidth());
    s.add("linewidth_hwhm_hz", 0.5 * cfg.cavity.linewidth());
    s.add("coupler_reflectivity", cfg.cavity.effective_R()[0]);
    s.add("off_resonance_reflection", r_off);
    s.add("nearest_low_order_resonance_fwhm", nearest);
    s.add("eta_trans", eff.eta_trans);
    s.add("eta_refl", eff.eta_refl);
    s.add("represented_weight", eff.represented_weight);
    s.add("eta_refl_normalized", eff.eta_refl / eff.represented_weight);
    s.add("eta_refl_total", eff.eta_refl_total);
    s.add("scan_represented_weight", eff_sq.represented_weight);
    s.add("sideband_frequency_hz", cfg.esa.center_freq);
    s.add("sideband_transmission", sideband_transmission(cfg.cavity, cfg.esa.center_freq));
    s.add("deepest_family", static_cast<double>(deepest));
    s.add("isolated_families", static_cast<double>(isolated_nominal));
    s.add("isolated_worst_error", worst_nominal);
    if (sc.resolved_finesse) {
        s.add("resolved_finesse", *sc.resolved_finesse);
        s.add("resolved_isolated_families", static_cast<double>(isolated_resolved));
        s.add("resolved_isolated_worst_error", worst_resolved);
        s.add("resolved_monotonic", monotonic ? "true" : "false");
    }
}

}  // namespace

std::vector<SqueezerBudget> squeezer_budgets(const Config& cfg, int max_order, Exec exec) {
    const double eta_det = detector_efficiency(cfg);
    std::vector<SqueezerBudget> out;
    for (const auto& s : cfg.squeezers) {
        SqueezerBudget b;
        b.label = s.label;
        b.eta_waveplate = visibility_to_efficiency(s.visibility);
        b.eta_cavity = s.cavity_efficiency ? *s.cavity_efficiency : modelled_cavity_efficiency(cfg, s, max_order, exec);
        b.eta_beamsplitter = cfg.beamsplitter_reflectivity;
        b.eta_detector = eta_det;
        const double chain[] = {b.eta_waveplate, b.eta_cavity, b.eta_beamsplitter, b.eta_detector};
        b.eta_total = b.eta_waveplate * b.eta_cavity * b.eta_beamsplitter * b.eta_detector;
        const bool phase = s.quadrature == Squeezer::Quadrature::phase;
        if (s.source_db) {
            b.source_var = phase ? 1.0 / from_db(*s.source_db) : from_db(*s.source_db);
            b.delivered_var = propagate_variance(b.source_var, chain);
        } else {
            if (phase) throw std::invalid_argument("squeezer " + s.label + ": targets need amplitude squeezing");
            b.delivered_var = s.target_floor_db ? from_db(*s.target_floor_db)
                                                : *s.target_std_factor * *s.target_std_factor;
            try {
                b.source_var = required_source_variance(b.delivered_var, chain);
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument("squeezer " + s.label + ": " + e.what());
            }
        }
        out.push_back(b);
    }
    return out;
}

Result run(const Config& cfg, const Options& options) {
    if (auto diags = validate(cfg); !diags.empty()) throw ConfigInvalid(std::move(diags));
    Result out;
    out.id = cfg.id;
    out.seed = options.seed.value_or(cfg.seed);
    out.max_order = options.max_order.value_or(58);
    if (out.max_order < 2 || out.max_order > 60) throw ConfigInvalid(std::vector<ConfigInvalid::Diagnostic>{{"max_order", "must lie in [2, 60]"}});
    Context ctx{cfg, out.seed, out.max_order, options.exec, out};

    out.summary.add("scenario", cfg.id);
    out.summary.add("kind", std::string(kind_name(cfg.kind)));
    out.summary.add("seed", std::to_string(out.seed));
    try {
        switch (cfg.kind) {
            case Kind::cavity_scan: run_cavity_scan(ctx); break;
            case Kind::noise_floors: run_noise_floors(ctx); break;
            case Kind::modulation: run_modulation(ctx); break;
            case Kind::ramp: run_ramp(ctx); break;
            case Kind::correlation: run_correlation(ctx); break;
            case Kind::sql_table: run_sql_table(ctx); break;
            case Kind::waist_opt: run_waist_opt(ctx); break;
        }
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const Error& e) {
        throw Error(e.kind(), cfg.id + ": " + e.what());
    }
    ctx.add_file("summary", out.summary.csv());
    return out;
}

io::Manifest manifest_of(const Result& result, const Config& config) {
    io::Manifest m;
    m.scenario = result.id;
    m.seed = result.seed;
    m.fields["version.artifact"] = SQZDISP_VERSION;
    m.fields["version.csv_schema"] = "1";
    m.fields["option.max_order"] = std::to_string(result.max_order);
    if (!config.source_text.empty()) m.fields["config"] = "sha256:" + io::sha256_hex(config.source_text);

    std::vector<std::string> wanted = config.outputs;
    for (const auto& name : wanted) {
        const bool known = std::any_of(result.files.begin(), result.files.end(),
                                       [&](const OutputFile& f) { return f.name == name; });
        if (!known) throw ConfigInvalid(std::vector<ConfigInvalid::Diagnostic>{{"outputs", "scenario produces no output '" + name + "'"}});
    }
    for (const auto& f : result.files)
        if (wanted.empty() || std::find(wanted.begin(), wanted.end(), f.name) != wanted.end())
            m.outputs[f.file] = io::sha256_hex(f.content);
    return m;
}

std::filesystem::path write(const Result& result, const Config& config, const std::filesystem::path& dir) {
    const auto manifest = manifest_of(result, config);
    for (const auto& f : result.files)
        if (manifest.outputs.count(f.file)) io::atomic_write(dir / f.file, f.content);
    const auto path = dir / (result.id + ".manifest");
    io::atomic_write(path, manifest.text());
    return path;
}

}  // namespace sqzdisp::scenario
