// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mbtvlc/channel.hpp"
#include "mbtvlc/emitters.hpp"
#include "mbtvlc/linkbudget.hpp"
#include "mbtvlc/mobility.hpp"
#include "mbtvlc/receivers.hpp"
#include "mbtvlc/scene.hpp"
#include "mbtvlc/scm_alloc.hpp"

namespace mbtvlc {

struct SystemParams {
    RoomConfig room;
    DiscretizationConfig discretization;
    std::vector<Vec3> mbt_positions;
    std::vector<Vec3> support_positions;
    UnitTemplate mbt = mbt_template();
    UnitTemplate support = support_template();
    ReceiverDesign wfov = wfov_design();
    ReceiverDesign adr = adr_design();
    ReceiverDesign niadr = niadr_design();
    NoiseParams noise;
    TonePlan tones;
};

SystemParams reference_params(bool with_support = true);

// Received power of every TB at every aperture of a receiver placed at one
// position, per watt transmitted.
struct Site {
    ReceiverSpec spec;
    std::vector<ReceiverFace> apertures;
    std::vector<FaceView> views;
    std::vector<double> unit_power;      // [tb * apertures + a], all path orders
    std::vector<double> unit_reflected;  // same, reflections only

    double power(std::size_t tb, std::size_t a) const { return unit_power[tb * apertures.size() + a]; }
    double reflected(std::size_t tb, std::size_t a) const { return unit_reflected[tb * apertures.size() + a]; }
};

class System {
  public:
    explicit System(SystemParams params);

    const SystemParams& params() const { return params_; }
    const Scene& scene() const { return scene_; }
    const std::vector<LightUnit>& units() const { return units_; }
    const std::vector<Branch>& tbs() const { return tbs_; }
    std::size_t tb_count() const { return tbs_.size(); }
    const SourceField& unit_field(std::size_t tb) const { return fields_.at(tb); }
    const ReceiverDesign& design(ReceiverKind kind) const;

    Site site(ReceiverKind kind, const Vec3& position) const;

    // Arrivals from one TB at one aperture with the given total transmit power.
    ImpulseResponse impulse(const Site& site, std::size_t tb, std::size_t aperture, double transmit_w,
                            const TraceConfig& config = {}) const;

    // Where the TB's axis meets the plane z, pulled inside the room by margin.
    Vec3 aim_point(std::size_t tb, double z, double margin = 0.1) const;

  private:
    SystemParams params_;
    Scene scene_;
    std::vector<LightUnit> units_;
    std::vector<Branch> tbs_;
    std::vector<SourceField> fields_;
};

// ---------------------------------------------------------------------------
// Single user

struct SingleUserResult {
    int tb = -1;
    std::size_t face = 0;
    double received_w = 0.0;
    LinkReport link;
    double mean_delay_s = 0.0;
    double delay_spread_s = 0.0;
    Bandwidth bandwidth;
    std::size_t candidates_traced = 0;
};

// TB and face with the highest SNR at the bit rate; ties to the lowest TB id,
// then the lowest face. Candidates are visited by received power and the
// search stops once no remaining one can beat the best SNR found.
SingleUserResult select_best_tb(const System& sys, ReceiverKind kind, const Vec3& position, double bit_rate);

// ---------------------------------------------------------------------------
// Tones and multiple users

// Green-channel CNR of every TB at its best aperture, and that aperture.
struct ToneView {
    std::vector<double> green_w;    // best-aperture green power per TB
    std::vector<double> cnr;        // per TB
    std::vector<std::size_t> face;  // best aperture per TB
};

ToneView tone_view(const System& sys, const Site& site);

enum class SecondTone {
    SameFace,  // second-strongest tone at the face that selected the best TB
    BestFace,  // second-best TB at its own best face
};

struct CalibrationOptions {
    std::size_t samples = 1000;
    double plane_z = 1.0;
    SecondTone second = SecondTone::SameFace;
    bool exclude_same_unit = false;
};

struct Calibration {
    DetectionStats stats;
    double sigma_t = 0.0;
    DetectionProbabilities probabilities;
    std::vector<double> c_ds;
    std::vector<double> c_us;
};

Calibration calibrate_detection_stats(const System& sys, const CalibrationOptions& options, std::uint64_t seed);

struct MultiuserOptions {
    bool los_cci = false;
    CciForm cci_form = CciForm::MeanSquare;
    ColorScaling scaling = ColorScaling::Linear;
    double ber_target = 1e-6;
};

struct UserLink {
    int tb = -1;
    std::size_t face = 0;
    double tone_hz = 0.0;
    double cnr = 0.0;
    double cci_green_a2 = 0.0;
    std::array<bool, 4> granted{};
    std::array<double, 4> sinr_db{};  // at the granted colour's rate
    std::array<double, 4> rate_bps{};
};

// Channel of one user, reusable across interference scenarios.
struct UserChannel {
    Site site;
    ToneView tones;
    ImpulseResponse ir;  // unit transmit power, own TB, selected aperture
    std::vector<double> interferer_green_w;  // per TB at the selected aperture
};

UserChannel user_channel(const System& sys, Site site, int tb, const MultiuserOptions& options);

// Highest bit rate meeting the BER target on one colour, given green CCI.
double color_rate(const System& sys, const UserChannel& ch, int tb, Color color, double i_green_a2,
                  const MultiuserOptions& options, double* sinr_db_at_rate = nullptr);

double color_sinr(const System& sys, const UserChannel& ch, int tb, Color color, double i_green_a2,
                  double bit_rate, const MultiuserOptions& options);

struct MultiuserResult {
    AllocationState state;
    std::vector<UserLink> users;
};

MultiuserResult run_multiuser(const System& sys, const std::vector<Vec3>& positions, const std::vector<int>& channels,
                              std::uint64_t seed, const MultiuserOptions& options);

// Reference user first, then one user at the aim point of every TB still
// unclaimed, repeated per_tb times per position.
std::vector<Vec3> multiuser_positions(const System& sys, const Vec3& reference, int per_position, double plane_z = 1.0);

// ---------------------------------------------------------------------------
// Mobility

enum class SinrColor { Min, Red, Yellow, Green, Blue };

struct MobilityOptions {
    double aggregate_rate_bps = 15e9;
    SinrColor color = SinrColor::Min;
    bool all_tbs_active = true;
    double plane_z = 1.0;
    MultiuserOptions link;
};

// SINR of a lone NI-ADR user on its best-CNR TB, dB.
double mobility_sinr_db(const System& sys, const Vec3& position, const MobilityOptions& options);

std::vector<double> mobility_sinr_line(const System& sys, double x, const std::vector<double>& ys,
                                       const MobilityOptions& options);

Cdf sinr_cdf_line(const std::vector<double>& sinr_db, const OccupancyModel* model);

std::vector<double> random_positions_sinr(const System& sys, std::size_t n, std::uint64_t seed,
                                          const MobilityOptions& options);

}  // namespace mbtvlc
