// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "appsched/rng.hpp"
#include "appsched/types.hpp"

namespace appsched {

// Log-distance macro-cell path loss, 128.1 + 37.6*log10(d[km]), in dB.
// Throws std::domain_error for d <= 0.
double path_loss_db(double distance_km);

// Independent Normal(0, sigma_db) draws, one per frequency chunk. Shadowing
// is frequency-selective but time-invariant: callers draw once per link and
// hold the values for the whole run.
Vector sample_shadowing(Rng& rng, Index num_chunks, double sigma_db = 8.0);

// Rayleigh fast fading as a Jakes-style sum of sinusoids, one independent
// complex envelope per lane (a lane is one 180 kHz chunk of one link).
// The envelope power |h|^2 has unit mean and exponential distribution.
class FadingProcess {
 public:
  FadingProcess(Rng& rng, Index num_lanes, double doppler_hz,
                int num_oscillators = 64);

  // Advances every lane by dt seconds and returns |h|^2 per lane.
  const Array& step(double dt);

  Index num_lanes() const { return static_cast<Index>(power_.size()); }
  double doppler_hz() const { return doppler_hz_; }

 private:
  double doppler_hz_;
  int oscillators_;
  // (oscillator, lane) banks; phase_i drives the in-phase sum, phase_q the
  // quadrature sum. rot_ holds e^{i*omega*dt} for the cached dt.
  Eigen::ArrayXXcd phase_i_, phase_q_, rot_;
  ArrayXX omega_;
  double cached_dt_ = -1.0;
  Array power_;
};

// Free-function spelling of FadingProcess::step.
inline const Array& step_fast_fading(FadingProcess& fp, double dt) {
  return fp.step(dt);
}

// Shannon throughput of one resource block, in rate units:
//   bandwidth * log2(1 + gain*power / (noise + interference)).
double rb_throughput(double bandwidth, double gain, double power, double noise,
                     double interference);

// Linear power gains and thermal noise of every (UE, eNodeB, RB) triple for
// one frame. Immutable once built; safe to share across threads.
struct ChannelRealization {
  std::vector<Matrix> gain;  // [enb] -> (ue, rb), dimensionless linear gain
  Matrix noise;              // (ue, rb), watts
};

// Per-replica channel generator: consumes node positions at construction,
// draws the static attenuation (path loss + shadowing) once, and evolves the
// fast fading frame by frame. In unity-gain mode every gain is exactly 1 and
// the noise is set so a uniform power split yields the configured SNR.
class ChannelModel {
 public:
  struct Params {
    RbGrid grid;
    double noise_w = 3.5e-15;
    double shadowing_sigma_db = 8.0;
    double doppler_hz = 5.0;
    double frame_duration_s = 1e-3;
    bool unity_gain = false;
    double unity_noise_w = 1.0;  // noise giving the reference SNR at unity gain
  };

  ChannelModel(const Params& params, const Matrix& ue_positions_m,
               const Matrix& enb_positions_m, Rng& rng);

  // Steps fading by one frame and composes the realization.
  ChannelRealization next_frame();

  // Static part only (fading frozen at its unit mean), used by the power
  // controller's aggregated view.
  ChannelRealization static_realization() const;

  Index num_ues() const { return num_ues_; }
  Index num_enbs() const { return num_enbs_; }
  const RbGrid& grid() const { return params_.grid; }

 private:
  ChannelRealization compose(const Array* fading) const;
  Index lane(Index ue, Index enb, Index chunk) const {
    return (ue * num_enbs_ + enb) * params_.grid.num_freq + chunk;
  }

  Params params_;
  Index num_ues_ = 0;
  Index num_enbs_ = 0;
  // static_gain_[enb](ue, chunk): linear gain from path loss + shadowing
  std::vector<Matrix> static_gain_;
  std::unique_ptr<FadingProcess> fading_;
};

}  // namespace appsched
