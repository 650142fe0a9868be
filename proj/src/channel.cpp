// SPDX-License-Identifier: Apache-2.0
#include "appsched/channel.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace appsched {

namespace {
constexpr double kPathLossInterceptDb = 128.1;
constexpr double kPathLossSlopeDb = 37.6;
constexpr double kInvLn2 = 1.4426950408889634;  // 1/ln(2)
constexpr double kMinDistanceKm = 1e-3;         // clamp co-located nodes to 1 m
}  // namespace

double path_loss_db(double distance_km) {
  if (!(distance_km > 0.0))
    throw std::domain_error("path_loss_db: distance must be > 0");
  return kPathLossInterceptDb + kPathLossSlopeDb * std::log10(distance_km);
}

Vector sample_shadowing(Rng& rng, Index num_chunks, double sigma_db) {
  Vector x(num_chunks);
  for (Index f = 0; f < num_chunks; ++f) x[f] = rng.normal(0.0, sigma_db);
  return x;
}

FadingProcess::FadingProcess(Rng& rng, Index num_lanes, double doppler_hz,
                             int num_oscillators)
    : doppler_hz_(doppler_hz), oscillators_(num_oscillators) {
  if (num_lanes < 1) throw std::invalid_argument("FadingProcess: need >= 1 lane");
  if (!(doppler_hz >= 0.0))
    throw std::invalid_argument("FadingProcess: doppler must be >= 0");
  if (num_oscillators < 8)
    throw std::invalid_argument("FadingProcess: need >= 8 oscillators");

  const double pi = std::numbers::pi;
  phase_i_.resize(oscillators_, num_lanes);
  phase_q_.resize(oscillators_, num_lanes);
  rot_.resize(oscillators_, num_lanes);
  omega_.resize(oscillators_, num_lanes);
  power_.resize(num_lanes);

  for (Index l = 0; l < num_lanes; ++l) {
    // Arrival angles per Zheng-Xiao: distinct per oscillator, with one
    // random rotation per lane so lanes decorrelate.
    const double theta = rng.uniform(-pi, pi);
    for (int m = 0; m < oscillators_; ++m) {
      const double angle = (2.0 * pi * (m + 1) - pi + theta) / (4.0 * oscillators_);
      omega_(m, l) = 2.0 * pi * doppler_hz_ * std::cos(angle);
      const double phi = rng.uniform(-pi, pi);
      const double psi = rng.uniform(-pi, pi);
      phase_i_(m, l) = std::complex<double>(std::cos(phi), std::sin(phi));
      phase_q_(m, l) = std::complex<double>(std::cos(psi), std::sin(psi));
    }
  }
}

const Array& FadingProcess::step(double dt) {
  if (!(dt > 0.0)) throw std::domain_error("FadingProcess::step: dt must be > 0");
  if (dt != cached_dt_) {
    rot_ = (std::complex<double>(0.0, 1.0) * omega_.cast<std::complex<double>>() * dt).exp();
    cached_dt_ = dt;
  }
  phase_i_ *= rot_;
  phase_q_ *= rot_;
  const double scale = 1.0 / std::sqrt(static_cast<double>(oscillators_));
  const Eigen::Array<std::complex<double>, 1, Eigen::Dynamic> sum_i =
      phase_i_.colwise().sum();
  const Eigen::Array<std::complex<double>, 1, Eigen::Dynamic> sum_q =
      phase_q_.colwise().sum();
  for (Index l = 0; l < power_.size(); ++l) {
    const double hi = sum_i(l).real() * scale;
    const double hq = sum_q(l).imag() * scale;
    power_[l] = hi * hi + hq * hq;
  }
  return power_;
}

double rb_throughput(double bandwidth, double gain, double power, double noise,
                     double interference) {
  if (!(bandwidth > 0.0)) throw std::domain_error("rb_throughput: bandwidth must be > 0");
  if (!(gain > 0.0)) throw std::domain_error("rb_throughput: gain must be > 0");
  if (!(power >= 0.0)) throw std::domain_error("rb_throughput: power must be >= 0");
  if (!(noise > 0.0)) throw std::domain_error("rb_throughput: noise must be > 0");
  if (!(interference >= 0.0))
    throw std::domain_error("rb_throughput: interference must be >= 0");
  const double sinr = gain * power / (noise + interference);
  return bandwidth * std::log1p(sinr) * kInvLn2;
}

ChannelModel::ChannelModel(const Params& params, const Matrix& ue_positions_m,
                           const Matrix& enb_positions_m, Rng& rng)
    : params_(params),
      num_ues_(ue_positions_m.rows()),
      num_enbs_(enb_positions_m.rows()) {
  if (num_ues_ < 1 || num_enbs_ < 1)
    throw std::invalid_argument("ChannelModel: need >= 1 UE and >= 1 eNodeB");

  const Index chunks = params_.grid.num_freq;
  static_gain_.assign(num_enbs_, Matrix(num_ues_, chunks));
  if (!params_.unity_gain) {
    for (Index b = 0; b < num_enbs_; ++b) {
      for (Index i = 0; i < num_ues_; ++i) {
        const double d_km = std::max(
            kMinDistanceKm,
            (ue_positions_m.row(i) - enb_positions_m.row(b)).norm() / 1000.0);
        const double pl = path_loss_db(d_km);
        const Vector shadow =
            sample_shadowing(rng, chunks, params_.shadowing_sigma_db);
        for (Index f = 0; f < chunks; ++f)
          static_gain_[b](i, f) = std::pow(10.0, -(pl + shadow[f]) / 10.0);
      }
    }
    fading_ = std::make_unique<FadingProcess>(
        rng, num_ues_ * num_enbs_ * chunks, params_.doppler_hz);
  } else {
    for (auto& g : static_gain_) g.setOnes();
  }
}

ChannelRealization ChannelModel::compose(const Array* fading) const {
  const Index rbs = params_.grid.size();
  ChannelRealization out;
  out.gain.assign(num_enbs_, Matrix(num_ues_, rbs));
  out.noise = Matrix::Constant(
      num_ues_, rbs, params_.unity_gain ? params_.unity_noise_w : params_.noise_w);
  for (Index b = 0; b < num_enbs_; ++b) {
    for (Index i = 0; i < num_ues_; ++i) {
      for (Index z = 0; z < rbs; ++z) {
        const Index f = params_.grid.chunk_of(z);
        const double fade = fading ? (*fading)[lane(i, b, f)] : 1.0;
        out.gain[b](i, z) = static_gain_[b](i, f) * fade;
      }
    }
  }
  return out;
}

ChannelRealization ChannelModel::next_frame() {
  if (params_.unity_gain || !fading_) return compose(nullptr);
  const Array& fade = fading_->step(params_.frame_duration_s);
  return compose(&fade);
}

ChannelRealization ChannelModel::static_realization() const {
  return compose(nullptr);
}

}  // namespace appsched
