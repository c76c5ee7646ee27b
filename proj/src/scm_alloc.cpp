// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/scm_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mbtvlc/error.hpp"
#include "mbtvlc/rng.hpp"

namespace mbtvlc {

double tone_frequency(int tb_id, const TonePlan& plan)
{
    require(tb_id >= 0 && tb_id < plan.tb_count, "TB id outside the tone plan");
    return plan.start_hz + tb_id * plan.spacing_hz;
}

double cnr(double r_g, double pr_green_w, double sigma_ts)
{
    if (!(sigma_ts > 0.0)) {
        throw PhysicsError("CNR with zero noise is undefined");
    }
    const double c = r_g * pr_green_w;
    return c * c / (2.0 * sigma_ts * sigma_ts);
}

double tone_power(double r_g, double pr_green_w, CciForm form)
{
    const double c = r_g * pr_green_w;
    return form == CciForm::MeanSquare ? c * c / 2.0 : (c / 2.0) * (c / 2.0);
}

double cci_green(int own_tb, std::span<const double> green_power_by_tb, std::span<const int> active_tbs,
                 double r_g, CciForm form)
{
    require(own_tb >= 0, "user has no assigned TB");
    double sum = 0.0;
    for (int k : active_tbs) {
        if (k == own_tb) {
            continue;
        }
        require(k >= 0 && static_cast<std::size_t>(k) < green_power_by_tb.size(), "active TB without a power entry");
        sum += tone_power(r_g, green_power_by_tb[static_cast<std::size_t>(k)], form);
    }
    return sum;
}

double color_interference(Color color, double i_green_a2, const ColorResponsivity& r, const ColorPower& pt,
                          ColorScaling scaling)
{
    const double rr = r[color] / r[Color::Green];
    double pp = pt[color] / pt[Color::Green];
    if (scaling == ColorScaling::Squared) {
        pp *= pp;
    }
    return rr * rr * pp * i_green_a2;
}

namespace {

void mean_std(std::span<const double> v, double& mean, double& sd)
{
    mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

DetectionStats fit_detection_stats(std::span<const double> c_ds, std::span<const double> c_us)
{
    require(c_ds.size() >= 2 && c_us.size() >= 2, "detection statistics need at least two samples");
    DetectionStats s;
    mean_std(c_ds, s.m_ds, s.s_ds);
    mean_std(c_us, s.m_us, s.s_us);
    s.samples = std::min(c_ds.size(), c_us.size());
    s.degenerate = !(s.m_ds > s.m_us);
    return s;
}

double opt_threshold(const DetectionStats& stats, double sigma_t)
{
    if (!(stats.s_ds > 0.0) || !(stats.s_us > 0.0) || !(sigma_t > 0.0)) {
        throw PhysicsError("detection statistics need positive variances");
    }
    const double t2 = sigma_t * sigma_t;
    const double v2 = stats.s_ds * stats.s_ds + t2;  // desired
    const double v1 = stats.s_us * stats.s_us + t2;  // undesired
    const double ds2 = stats.s_ds * stats.s_ds;
    const double us2 = stats.s_us * stats.s_us;
    if (std::abs(ds2 - us2) < 1e-9 * std::max(ds2, us2)) {
        return 0.5 * (stats.m_ds + stats.m_us);
    }
    // Root of v1 (z - m2)^2 - v2 (z - m1)^2 = v1 v2 ln(v1 / v2) lying between
    // the means, in a form without the v1 - v2 cancellation.
    double m2 = stats.m_ds;
    double m1 = stats.m_us;
    const bool mirrored = m2 < m1;
    if (mirrored) {
        m2 = -m2;
        m1 = -m1;
    }
    const double l = std::log(v1 / v2);
    const double disc = v1 * v2 * ((m2 - m1) * (m2 - m1) + (v1 - v2) * l);
    const double num = v1 * m2 * m2 - v2 * m1 * m1 - v1 * v2 * l;
    const double den = (v1 * m2 - v2 * m1) + std::sqrt(disc);
    if (den == 0.0) {
        return 0.5 * (stats.m_ds + stats.m_us);
    }
    const double z = num / den;
    return mirrored ? -z : z;
}

DetectionProbabilities detection_probabilities_at(const DetectionStats& stats, double sigma_t, double threshold,
                                                  int k)
{
    require(k >= 1, "need at least one TB");
    if (!(stats.s_ds > 0.0) || !(stats.s_us > 0.0) || !(sigma_t >= 0.0)) {
        throw PhysicsError("detection statistics need positive variances");
    }
    const double t2 = sigma_t * sigma_t;
    const double sd2 = std::sqrt(2.0 * (stats.s_ds * stats.s_ds + t2));
    const double sd1 = std::sqrt(2.0 * (stats.s_us * stats.s_us + t2));
    DetectionProbabilities p;
    p.threshold = threshold;
    p.p_cds = 0.5 * std::erfc((threshold - stats.m_ds) / sd2);
    p.p_fus = 0.5 * std::erfc((threshold - stats.m_us) / sd1);
    p.p_cus = 1.0 - p.p_fus;
    // log-space keeps P_wd accurate when it is tiny.
    const double log_cd = std::log(p.p_cds) + (k - 1) * std::log1p(-p.p_fus);
    p.p_cd = std::exp(log_cd);
    p.p_wd = -std::expm1(log_cd);
    return p;
}

DetectionProbabilities detection_probabilities(const DetectionStats& stats, double sigma_t, int k)
{
    return detection_probabilities_at(stats, sigma_t, opt_threshold(stats, sigma_t), k);
}

std::vector<int> rank_tbs(std::span<const double> metric_by_tb)
{
    std::vector<int> ids;
    for (std::size_t i = 0; i < metric_by_tb.size(); ++i) {
        if (metric_by_tb[i] > 0.0) {
            ids.push_back(static_cast<int>(i));
        }
    }
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        return metric_by_tb[static_cast<std::size_t>(a)] > metric_by_tb[static_cast<std::size_t>(b)];
    });
    return ids;
}

std::vector<int> AllocationState::active_tbs() const
{
    std::vector<int> out;
    for (int tb = 0; tb < tb_count; ++tb) {
        if (free_colors(tb) < 4) {
            out.push_back(tb);
        }
    }
    return out;
}

int AllocationState::free_colors(int tb) const
{
    const auto& o = owner.at(static_cast<std::size_t>(tb));
    return static_cast<int>(std::count(o.begin(), o.end(), -1));
}

std::string AllocationState::serialize() const
{
    std::ostringstream os;
    os << "seed " << seed << " tbs " << tb_count << '\n';
    for (const auto& u : users) {
        os << "user " << u.user << " tb " << u.tb << " rank " << u.rank << " colors";
        for (Color c : u.colors) {
            os << ' ' << color_name(c);
        }
        os << '\n';
    }
    return os.str();
}

AllocationState allocate(const std::vector<std::vector<double>>& cnr_by_user, const std::vector<int>& channels,
                         std::uint64_t seed)
{
    require(cnr_by_user.size() == channels.size(), "one channel request per user");
    AllocationState st;
    st.seed = seed;
    st.tb_count = cnr_by_user.empty() ? 0 : static_cast<int>(cnr_by_user.front().size());
    st.owner.assign(static_cast<std::size_t>(st.tb_count), {-1, -1, -1, -1});
    Rng rng(seed);
    for (std::size_t u = 0; u < cnr_by_user.size(); ++u) {
        require(static_cast<int>(cnr_by_user[u].size()) == st.tb_count, "CNR table is ragged");
        require(channels[u] >= 1 && channels[u] <= 4, "a user may ask for one to four colours");
        const auto ranking = rank_tbs(cnr_by_user[u]);
        UserGrant g;
        g.user = static_cast<int>(u);
        for (std::size_t r = 0; r < ranking.size(); ++r) {
            if (st.free_colors(ranking[r]) >= channels[u]) {
                g.tb = ranking[r];
                g.rank = static_cast<int>(r);
                break;
            }
        }
        if (g.tb < 0) {
            throw CapacityError("no visible TB has " + std::to_string(channels[u]) + " free colour(s) for user " +
                                std::to_string(u));
        }
        auto& own = st.owner[static_cast<std::size_t>(g.tb)];
        for (int n = 0; n < channels[u]; ++n) {
            std::vector<int> free;
            for (int c = 0; c < 4; ++c) {
                if (own[static_cast<std::size_t>(c)] < 0) {
                    free.push_back(c);
                }
            }
            const int c = free[uniform_index(rng, free.size())];
            own[static_cast<std::size_t>(c)] = g.user;
            g.colors.push_back(kAllColors[static_cast<std::size_t>(c)]);
        }
        std::sort(g.colors.begin(), g.colors.end());
        st.users.push_back(g);
    }
    return st;
}

}  // namespace mbtvlc
