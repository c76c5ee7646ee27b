// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "mbtvlc/error.hpp"
#include "mbtvlc/parallel.hpp"
#include "mbtvlc/rng.hpp"

namespace mbtvlc {

SystemParams reference_params(bool with_support)
{
    SystemParams p;
    p.mbt_positions = reference_mbt_positions();
    if (with_support) {
        p.support_positions = reference_support_positions();
    }
    return p;
}

System::System(SystemParams params) : params_(std::move(params))
{
    for (const auto* d : {&params_.wfov, &params_.adr, &params_.niadr}) {
        validate(make_receiver(*d, {1, 1, 1}));
    }
    const Room room = build_room(params_.room);
    for (const auto& p : params_.mbt_positions) {
        require(room.contains(p), "MBT unit lies outside the room");
    }
    for (const auto& p : params_.support_positions) {
        require(room.contains(p), "support unit lies outside the room");
    }
    scene_ = build_scene(room, params_.discretization);
    units_ = build_units(params_.mbt_positions, params_.mbt, params_.support_positions, params_.support);
    tbs_ = communication_branches(units_);
    for (std::size_t i = 0; i < tbs_.size(); ++i) {
        require(tbs_[i].id == static_cast<int>(i), "communication branch ids must be 0..K-1");
    }
    require(static_cast<int>(tbs_.size()) <= params_.tones.tb_count, "more TBs than SCM tones");
    fields_.resize(tbs_.size());
    parallel_for(tbs_.size(), [&](std::size_t i) { fields_[i] = build_source_field(as_source(tbs_[i], 1.0), scene_); });
}

const ReceiverDesign& System::design(ReceiverKind kind) const
{
    switch (kind) {
    case ReceiverKind::Wfov: return params_.wfov;
    case ReceiverKind::Adr: return params_.adr;
    case ReceiverKind::NiAdr: return params_.niadr;
    }
    return params_.wfov;
}

Site System::site(ReceiverKind kind, const Vec3& position) const
{
    Site s;
    s.spec = make_receiver(design(kind), position);
    s.apertures = s.spec.apertures();
    const std::size_t na = s.apertures.size();
    s.views.resize(na);
    parallel_for(na, [&](std::size_t a) { s.views[a] = build_face_view(s.apertures[a], scene_); });
    s.unit_power.assign(tbs_.size() * na, 0.0);
    s.unit_reflected.assign(tbs_.size() * na, 0.0);
    const TraceConfig reflections{false, true, true};
    parallel_for(tbs_.size(), [&](std::size_t tb) {
        for (std::size_t a = 0; a < na; ++a) {
            s.unit_power[tb * na + a] = received_power(fields_[tb], s.views[a]);
            s.unit_reflected[tb * na + a] = received_power(fields_[tb], s.views[a], reflections);
        }
    });
    return s;
}

ImpulseResponse System::impulse(const Site& site, std::size_t tb, std::size_t aperture, double transmit_w,
                                const TraceConfig& config) const
{
    return trace(fields_.at(tb), site.views.at(aperture), scene_, config).scaled(transmit_w);
}

Vec3 System::aim_point(std::size_t tb, double z, double margin) const
{
    const Branch& b = tbs_.at(tb);
    const Vec3 d = branch_direction(b);
    Vec3 p = b.position + d * ((z - b.position.z) / d.z);
    p.x = std::clamp(p.x, margin, scene_.room.width() - margin);
    p.y = std::clamp(p.y, margin, scene_.room.length() - margin);
    return p;
}

// ---------------------------------------------------------------------------

SingleUserResult select_best_tb(const System& sys, ReceiverKind kind, const Vec3& position, double bit_rate)
{
    require(kind != ReceiverKind::NiAdr, "single-user links use the W-FOV receiver or the ADR");
    const Site site = sys.site(kind, position);
    const std::size_t na = site.apertures.size();
    const NoiseParams& noise = sys.params().noise;
    const double bw = receiver_bandwidth(bit_rate, noise);

    struct Candidate {
        std::size_t tb;
        std::size_t a;
        double transmit_w;
        double bound;
    };
    std::vector<Candidate> cands;
    for (std::size_t tb = 0; tb < sys.tb_count(); ++tb) {
        const double pt = sys.tbs()[tb].total_power_w().total();
        for (std::size_t a = 0; a < na; ++a) {
            const double p = site.power(tb, a) * pt;
            if (p > 0.0) {
                const auto& f = site.apertures[a];
                const double floor = noise_std(f.responsivity, 0.0, bw, f.area_m2, noise);
                const double eye = f.responsivity * p / floor;
                cands.push_back({tb, a, pt, eye * eye});
            }
        }
    }
    if (cands.empty()) {
        throw PhysicsError("no TB reaches the receiver");
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.bound > y.bound; });

    SingleUserResult best;
    ImpulseResponse best_ir;
    double best_snr = -1.0;
    for (const auto& c : cands) {
        if (c.bound < best_snr) {
            break;
        }
        ++best.candidates_traced;
        ImpulseResponse ir = sys.impulse(site, c.tb, c.a, c.transmit_w);
        const auto& f = site.apertures[c.a];
        const LinkReport link = evaluate_link({&ir, f.responsivity, f.area_m2, noise, 0.0}, bit_rate);
        const bool better = link.snr > best_snr ||
                            (link.snr == best_snr && std::tie(c.tb, c.a) < std::tie(best.tb, best.face));
        if (better) {
            best_snr = link.snr;
            best.tb = static_cast<int>(c.tb);
            best.face = c.a;
            best.link = link;
            best.received_w = ir.total_power();
            best_ir = std::move(ir);
        }
    }
    best.mean_delay_s = mean_delay(best_ir);
    best.delay_spread_s = delay_spread(best_ir);
    best.bandwidth = bandwidth_3db(best_ir);
    return best;
}

// ---------------------------------------------------------------------------

namespace {

ReceiverFace green_face(const System& sys)
{
    const auto spec = make_receiver(sys.design(ReceiverKind::NiAdr), {0, 0, 0});
    const auto* g = spec.face_for(0, Color::Green);
    require(g != nullptr, "NI-ADR has no green face");
    return *g;
}

double green_transmit(const Branch& b) { return b.ld_count * b.ld_power_w.green; }

double color_transmit(const Branch& b, Color c) { return b.ld_count * b.ld_power_w[c]; }

double tone_sigma(const System& sys, const ReceiverFace& g, double pr)
{
    return noise_std(g.responsivity, pr, sys.params().tones.bpf_bandwidth_hz, g.area_m2, sys.params().noise);
}

}  // namespace

ToneView tone_view(const System& sys, const Site& site)
{
    const ReceiverFace g = green_face(sys);
    const std::size_t na = site.apertures.size();
    ToneView v;
    v.green_w.resize(sys.tb_count());
    v.cnr.resize(sys.tb_count());
    v.face.resize(sys.tb_count());
    for (std::size_t tb = 0; tb < sys.tb_count(); ++tb) {
        std::vector<double> p(na);
        for (std::size_t a = 0; a < na; ++a) {
            p[a] = site.power(tb, a) * green_transmit(sys.tbs()[tb]);
        }
        const Selection s = select_best(p);
        v.face[tb] = s.index;
        v.green_w[tb] = s.value;
        v.cnr[tb] = cnr(g.responsivity, s.value, tone_sigma(sys, g, s.value));
    }
    return v;
}

Calibration calibrate_detection_stats(const System& sys, const CalibrationOptions& options, std::uint64_t seed)
{
    require(options.samples >= 2, "calibration needs at least two samples");
    const Room& room = sys.scene().room;
    Rng rng(seed);
    std::vector<Vec3> positions(options.samples);
    for (auto& p : positions) {
        p.x = uniform(rng, 0.0, room.width());
        p.y = uniform(rng, 0.0, room.length());
        p.z = options.plane_z;
    }
    const ReceiverFace g = green_face(sys);
    Calibration cal;
    cal.c_ds.resize(options.samples);
    cal.c_us.resize(options.samples);
    parallel_for(options.samples, [&](std::size_t i) {
        const Site site = sys.site(ReceiverKind::NiAdr, positions[i]);
        const ToneView tv = tone_view(sys, site);
        const auto ranking = rank_tbs(tv.cnr);
        if (ranking.size() < 2) {
            throw PhysicsError("calibration position sees fewer than two TBs");
        }
        const auto best = static_cast<std::size_t>(ranking[0]);
        const int best_unit = sys.tbs()[best].unit;
        auto eligible = [&](std::size_t tb) {
            return tb != best && !(options.exclude_same_unit && sys.tbs()[tb].unit == best_unit);
        };
        double second = 0.0;
        if (options.second == SecondTone::SameFace) {
            for (std::size_t tb = 0; tb < sys.tb_count(); ++tb) {
                if (eligible(tb)) {
                    second = std::max(second, site.power(tb, tv.face[best]) * green_transmit(sys.tbs()[tb]));
                }
            }
        } else {
            for (std::size_t tb = 0; tb < sys.tb_count(); ++tb) {
                if (eligible(tb)) {
                    second = std::max(second, tv.green_w[tb]);
                }
            }
        }
        cal.c_ds[i] = g.responsivity * tv.green_w[best];
        cal.c_us[i] = g.responsivity * second;
    });
    cal.stats = fit_detection_stats(cal.c_ds, cal.c_us);
    cal.sigma_t = tone_sigma(sys, g, cal.stats.m_ds / g.responsivity);
    cal.probabilities = detection_probabilities(cal.stats, cal.sigma_t, static_cast<int>(sys.tb_count()));
    return cal;
}

UserChannel user_channel(const System& sys, Site site, int tb, const MultiuserOptions& options)
{
    UserChannel ch;
    ch.site = std::move(site);
    ch.tones = tone_view(sys, ch.site);
    const auto own = static_cast<std::size_t>(tb);
    const std::size_t face = ch.tones.face.at(own);
    ch.ir = sys.impulse(ch.site, own, face, 1.0);
    ch.interferer_green_w.resize(sys.tb_count());
    for (std::size_t k = 0; k < sys.tb_count(); ++k) {
        const double unit = options.los_cci ? ch.site.power(k, face) : ch.site.reflected(k, face);
        ch.interferer_green_w[k] = unit * green_transmit(sys.tbs()[k]);
    }
    return ch;
}

double color_sinr(const System& sys, const UserChannel& ch, int tb, Color color, double i_green_a2, double bit_rate,
                  const MultiuserOptions& options)
{
    const ReceiverDesign& d = sys.design(ReceiverKind::NiAdr);
    const Branch& b = sys.tbs().at(static_cast<std::size_t>(tb));
    SignalStats s = isi_split(ch.ir, bit_rate);
    const double pt = color_transmit(b, color);
    s.p_s1 *= pt;
    s.p_s0 *= pt;
    const double r = d.colors[color];
    const double sigma = noise_std(r, s.p_s1, receiver_bandwidth(bit_rate, sys.params().noise), d.area_m2,
                                   sys.params().noise);
    const double ic = color_interference(color, i_green_a2, d.colors, b.ld_power_w, options.scaling);
    return sinr(s, r, sigma, ic);
}

double color_rate(const System& sys, const UserChannel& ch, int tb, Color color, double i_green_a2,
                  const MultiuserOptions& options, double* sinr_db_at_rate)
{
    double rate = 0.0;
    try {
        rate = max_data_rate(
            [&](double r) { return color_sinr(sys, ch, tb, color, i_green_a2, r, options); }, options.ber_target);
    } catch (const PhysicsError&) {
        rate = 0.0;
    }
    if (sinr_db_at_rate) {
        const double at = rate > 0.0 ? rate : RateSearch{}.min_bps;
        *sinr_db_at_rate = to_db(color_sinr(sys, ch, tb, color, i_green_a2, at, options));
    }
    return rate;
}

MultiuserResult run_multiuser(const System& sys, const std::vector<Vec3>& positions, const std::vector<int>& channels,
                              std::uint64_t seed, const MultiuserOptions& options)
{
    require(positions.size() == channels.size(), "one channel request per user");
    std::vector<Site> sites(positions.size());
    std::vector<std::vector<double>> cnr_table(positions.size());
    parallel_for(positions.size(), [&](std::size_t u) {
        sites[u] = sys.site(ReceiverKind::NiAdr, positions[u]);
        cnr_table[u] = tone_view(sys, sites[u]).cnr;
    });
    MultiuserResult res;
    res.state = allocate(cnr_table, channels, seed);
    const auto active = res.state.active_tbs();
    const ReceiverFace g = green_face(sys);
    res.users.resize(positions.size());
    parallel_for(positions.size(), [&](std::size_t u) {
        const UserGrant& grant = res.state.users[u];
        UserChannel ch = user_channel(sys, std::move(sites[u]), grant.tb, options);
        UserLink& l = res.users[u];
        l.tb = grant.tb;
        l.face = ch.tones.face[static_cast<std::size_t>(grant.tb)];
        l.tone_hz = tone_frequency(grant.tb, sys.params().tones);
        l.cnr = ch.tones.cnr[static_cast<std::size_t>(grant.tb)];
        l.cci_green_a2 = cci_green(grant.tb, ch.interferer_green_w, active, g.responsivity, options.cci_form);
        for (Color c : grant.colors) {
            const auto ci = static_cast<std::size_t>(c);
            l.granted[ci] = true;
            l.rate_bps[ci] = color_rate(sys, ch, grant.tb, c, l.cci_green_a2, options, &l.sinr_db[ci]);
        }
    });
    return res;
}

std::vector<Vec3> multiuser_positions(const System& sys, const Vec3& reference, int per_position, double plane_z)
{
    require(per_position >= 1, "at least one user per position");
    const ToneView tv = tone_view(sys, sys.site(ReceiverKind::NiAdr, reference));
    const auto ranking = rank_tbs(tv.cnr);
    require(!ranking.empty(), "reference position sees no TB");
    std::vector<Vec3> out(static_cast<std::size_t>(per_position), reference);
    for (std::size_t tb = 0; tb < sys.tb_count(); ++tb) {
        if (static_cast<int>(tb) == ranking[0]) {
            continue;
        }
        const Vec3 p = sys.aim_point(tb, plane_z);
        for (int i = 0; i < per_position; ++i) {
            out.push_back(p);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

double mobility_sinr_db(const System& sys, const Vec3& position, const MobilityOptions& options)
{
    require(options.aggregate_rate_bps > 0.0, "aggregate rate must be positive");
    Site site = sys.site(ReceiverKind::NiAdr, position);
    const auto ranking = rank_tbs(tone_view(sys, site).cnr);
    if (ranking.empty()) {
        throw PhysicsError("no TB reaches the receiver");
    }
    const int tb = ranking[0];
    UserChannel ch = user_channel(sys, std::move(site), tb, options.link);
    double i_green = 0.0;
    if (options.all_tbs_active) {
        std::vector<int> all(sys.tb_count());
        for (std::size_t k = 0; k < all.size(); ++k) {
            all[k] = static_cast<int>(k);
        }
        i_green = cci_green(tb, ch.interferer_green_w, all, green_face(sys).responsivity, options.link.cci_form);
    }
    const double rate = options.aggregate_rate_bps / 4.0;
    auto at = [&](Color c) { return to_db(color_sinr(sys, ch, tb, c, i_green, rate, options.link)); };
    switch (options.color) {
    case SinrColor::Red: return at(Color::Red);
    case SinrColor::Yellow: return at(Color::Yellow);
    case SinrColor::Green: return at(Color::Green);
    case SinrColor::Blue: return at(Color::Blue);
    case SinrColor::Min: break;
    }
    double m = std::numeric_limits<double>::infinity();
    for (Color c : kAllColors) {
        m = std::min(m, at(c));
    }
    return m;
}

std::vector<double> mobility_sinr_line(const System& sys, double x, const std::vector<double>& ys,
                                       const MobilityOptions& options)
{
    const Room& room = sys.scene().room;
    for (double y : ys) {
        if (!room.contains({x, y, options.plane_z})) {
            throw ConfigError("mobility line leaves the room");
        }
    }
    std::vector<double> out(ys.size());
    parallel_for(ys.size(), [&](std::size_t i) { out[i] = mobility_sinr_db(sys, {x, ys[i], options.plane_z}, options); });
    return out;
}

Cdf sinr_cdf_line(const std::vector<double>& sinr_db, const OccupancyModel* model)
{
    std::vector<double> w(sinr_db.size(), 1.0 / static_cast<double>(sinr_db.size()));
    if (model) {
        require(static_cast<std::size_t>(model->capacity) + 1 == sinr_db.size(),
                "one SINR value per queue state");
        w = occupancy_pmf(*model);
    }
    return weighted_cdf(sinr_db, w);
}

std::vector<double> random_positions_sinr(const System& sys, std::size_t n, std::uint64_t seed,
                                          const MobilityOptions& options)
{
    require(n >= 1, "need at least one random position");
    const Room& room = sys.scene().room;
    Rng rng(seed);
    std::vector<Vec3> pos(n);
    for (auto& p : pos) {
        p.x = uniform(rng, 0.0, room.width());
        p.y = uniform(rng, 0.0, room.length());
        p.z = options.plane_z;
    }
    std::vector<double> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = mobility_sinr_db(sys, pos[i], options); });
    return out;
}

}  // namespace mbtvlc
