// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/specgen/generator.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <random>

#include <json.hpp>

#include "signvoice/core/error.hpp"
#include "signvoice/core/tensor_io.hpp"

namespace signvoice {
namespace {

constexpr double kNormEps = 1e-5;
constexpr double kLeakySlope = 0.01;

struct ConvGeom {
  std::size_t cin = 0, cout = 0;
  std::size_t in_h = 0, in_w = 0, out_h = 0, out_w = 0;
  std::size_t kh = 1, kw = 1, sh = 1, sw = 1, ph = 0, pw = 0;

  std::size_t in_size() const { return cin * in_h * in_w; }
  std::size_t out_size() const { return cout * out_h * out_w; }
};

ConvGeom make_geom(std::size_t cin, std::size_t cout, std::size_t in_h, std::size_t in_w,
                   const DeconvBlockSpec& spec) {
  ConvGeom g;
  g.cin = cin;
  g.cout = cout;
  g.in_h = in_h;
  g.in_w = in_w;
  g.kh = spec.kernel[0];
  g.kw = spec.kernel[1];
  g.sh = spec.stride[0];
  g.sw = spec.stride[1];
  g.ph = spec.padding[0];
  g.pw = spec.padding[1];
  g.out_h = (in_h - 1) * g.sh + g.kh - 2 * g.ph;
  g.out_w = (in_w - 1) * g.sw + g.kw - 2 * g.pw;
  return g;
}

DeconvBlockSpec closing_spec() {
  DeconvBlockSpec s;
  s.out_channels = 1;
  s.kernel = {3, 3};
  s.stride = {1, 1};
  s.padding = {1, 1};
  return s;
}

// Kernel layout: cin x cout x kh x kw.
template <typename Real>
void deconv_forward(const ConvGeom& g, const Real* in, const Real* kernel, const Real* bias,
                    Real* out) {
  const std::size_t plane = g.out_h * g.out_w;
  for (std::size_t co = 0; co < g.cout; ++co)
    for (std::size_t i = 0; i < plane; ++i) out[co * plane + i] = bias ? bias[co] : Real(0);
  for (std::size_t ci = 0; ci < g.cin; ++ci) {
    for (std::size_t iy = 0; iy < g.in_h; ++iy) {
      for (std::size_t ix = 0; ix < g.in_w; ++ix) {
        const Real v = in[(ci * g.in_h + iy) * g.in_w + ix];
        for (std::size_t co = 0; co < g.cout; ++co) {
          const Real* k = kernel + (ci * g.cout + co) * g.kh * g.kw;
          Real* o = out + co * plane;
          for (std::size_t ky = 0; ky < g.kh; ++ky) {
            const auto oy = static_cast<std::ptrdiff_t>(iy * g.sh + ky) -
                            static_cast<std::ptrdiff_t>(g.ph);
            if (oy < 0 || oy >= static_cast<std::ptrdiff_t>(g.out_h)) continue;
            for (std::size_t kx = 0; kx < g.kw; ++kx) {
              const auto ox = static_cast<std::ptrdiff_t>(ix * g.sw + kx) -
                              static_cast<std::ptrdiff_t>(g.pw);
              if (ox < 0 || ox >= static_cast<std::ptrdiff_t>(g.out_w)) continue;
              o[static_cast<std::size_t>(oy) * g.out_w + static_cast<std::size_t>(ox)] +=
                  v * k[ky * g.kw + kx];
            }
          }
        }
      }
    }
  }
}

// Accumulates into grad_kernel / grad_bias and overwrites grad_in.
template <typename Real>
void deconv_backward(const ConvGeom& g, const Real* in, const Real* kernel, const Real* grad_out,
                     Real* grad_kernel, Real* grad_bias, Real* grad_in) {
  const std::size_t plane = g.out_h * g.out_w;
  if (grad_bias)
    for (std::size_t co = 0; co < g.cout; ++co)
      for (std::size_t i = 0; i < plane; ++i) grad_bias[co] += grad_out[co * plane + i];
  for (std::size_t ci = 0; ci < g.cin; ++ci) {
    for (std::size_t iy = 0; iy < g.in_h; ++iy) {
      for (std::size_t ix = 0; ix < g.in_w; ++ix) {
        const std::size_t ii = (ci * g.in_h + iy) * g.in_w + ix;
        const Real v = in[ii];
        Real acc = 0;
        for (std::size_t co = 0; co < g.cout; ++co) {
          const std::size_t kbase = (ci * g.cout + co) * g.kh * g.kw;
          const Real* go = grad_out + co * plane;
          for (std::size_t ky = 0; ky < g.kh; ++ky) {
            const auto oy = static_cast<std::ptrdiff_t>(iy * g.sh + ky) -
                            static_cast<std::ptrdiff_t>(g.ph);
            if (oy < 0 || oy >= static_cast<std::ptrdiff_t>(g.out_h)) continue;
            for (std::size_t kx = 0; kx < g.kw; ++kx) {
              const auto ox = static_cast<std::ptrdiff_t>(ix * g.sw + kx) -
                              static_cast<std::ptrdiff_t>(g.pw);
              if (ox < 0 || ox >= static_cast<std::ptrdiff_t>(g.out_w)) continue;
              const Real d =
                  go[static_cast<std::size_t>(oy) * g.out_w + static_cast<std::size_t>(ox)];
              grad_kernel[kbase + ky * g.kw + kx] += v * d;
              acc += kernel[kbase + ky * g.kw + kx] * d;
            }
          }
        }
        grad_in[ii] = acc;
      }
    }
  }
}

// Normalizes x[0..n) to zero mean and unit variance (biased), returning
// 1/sqrt(var + eps) and writing the normalized values to xhat.
template <typename Real>
Real normalize(const Real* x, std::size_t n, Real* xhat) {
  Real mean = 0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i];
  mean /= static_cast<Real>(n);
  Real var = 0;
  for (std::size_t i = 0; i < n; ++i) var += (x[i] - mean) * (x[i] - mean);
  var /= static_cast<Real>(n);
  const Real inv_std = Real(1) / std::sqrt(var + static_cast<Real>(kNormEps));
  for (std::size_t i = 0; i < n; ++i) xhat[i] = (x[i] - mean) * inv_std;
  return inv_std;
}

// Given dL/dxhat over one normalization group, writes dL/dx.
template <typename Real>
void normalize_backward(const Real* xhat, const Real* grad_xhat, std::size_t n, Real inv_std,
                        Real* grad_x) {
  Real sum = 0, dot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += grad_xhat[i];
    dot += grad_xhat[i] * xhat[i];
  }
  const Real count = static_cast<Real>(n);
  for (std::size_t i = 0; i < n; ++i)
    grad_x[i] = inv_std / count * (count * grad_xhat[i] - sum - xhat[i] * dot);
}

// Inverted-dropout mask: 0 or 1/(1-p).
template <typename Real>
std::vector<Real> dropout_mask(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<Real> mask(n);
  const Real keep = static_cast<Real>(1.0 / (1.0 - p));
  for (auto& m : mask) m = (static_cast<double>(rng() >> 11) * 0x1.0p-53) < p ? Real(0) : keep;
  return mask;
}

// Maps an index along the output axis to the natural axis, or -1 for padding.
std::ptrdiff_t crop_source(std::size_t i, std::size_t natural, std::size_t target) {
  if (natural >= target) return static_cast<std::ptrdiff_t>(i + (natural - target) / 2);
  const std::size_t off = (target - natural) / 2;
  if (i < off || i - off >= natural) return -1;
  return static_cast<std::ptrdiff_t>(i - off);
}

struct DenseIndex {
  std::size_t weight, bias, gain, offset;
};
struct BlockIndex {
  std::size_t weight, gain, offset;
};
struct BranchIndex {
  std::vector<BlockIndex> blocks;
  std::size_t final_weight, final_bias;
};

DenseIndex dense_index(std::size_t stage) {
  return {4 * stage, 4 * stage + 1, 4 * stage + 2, 4 * stage + 3};
}

BranchIndex branch_index(const GeneratorParams& p, std::size_t branch) {
  BranchIndex idx;
  const std::size_t per_branch = 3 * p.blocks.size() + 2;
  std::size_t next = 4 * p.mlp_dims.size() + branch * per_branch;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    idx.blocks.push_back({next, next + 1, next + 2});
    next += 3;
  }
  idx.final_weight = next;
  idx.final_bias = next + 1;
  return idx;
}

constexpr const char* kBranchNames[2] = {"real", "imag"};

}  // namespace

template <typename Real>
struct SpectrogramGenerator<Real>::Tape {
  struct Dense {
    std::vector<Real> in, xhat, pre_act, mask;
    Real inv_std = 0;
  };
  struct Block {
    ConvGeom geom;
    std::vector<Real> in, xhat, pre_act, mask, inv_std;
  };
  struct Branch {
    std::vector<Block> blocks;
    ConvGeom final_geom;
    std::vector<Real> final_in;
  };
  std::vector<Dense> mlp;
  std::array<Branch, 2> branches;
};

template <typename Real>
SpectrogramGenerator<Real>::SpectrogramGenerator(GeneratorParams params)
    : params_(std::move(params)) {
  params_.validate();
  std::size_t in = params_.input_dim;
  for (std::size_t s = 0; s < params_.mlp_dims.size(); ++s) {
    const std::size_t out = params_.mlp_dims[s];
    const std::string pre = "mlp." + std::to_string(s) + ".";
    weights_.add(pre + "weight", {out, in});
    weights_.add(pre + "bias", {out});
    weights_.add(pre + "ln_gain", {out}, Real(1));
    weights_.add(pre + "ln_offset", {out});
    in = out;
  }
  for (std::size_t br = 0; br < 2; ++br) {
    std::size_t cin = params_.reshape_channels;
    for (std::size_t b = 0; b < params_.blocks.size(); ++b) {
      const auto& spec = params_.blocks[b];
      const std::string pre = std::string(kBranchNames[br]) + ".block." + std::to_string(b) + ".";
      weights_.add(pre + "weight", {cin, spec.out_channels, spec.kernel[0], spec.kernel[1]});
      weights_.add(pre + "in_gain", {spec.out_channels}, Real(1));
      weights_.add(pre + "in_offset", {spec.out_channels});
      cin = spec.out_channels;
    }
    const std::string pre = std::string(kBranchNames[br]) + ".final.";
    weights_.add(pre + "weight", {cin, 1, 3, 3});
    weights_.add(pre + "bias", {1});
  }
}

template <typename Real>
SpectrogramGenerator<Real> SpectrogramGenerator<Real>::random(const GeneratorParams& params,
                                                              std::uint64_t seed) {
  SpectrogramGenerator g(params);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto fill = [&](std::size_t index, double stddev) {
    for (auto& v : g.weights_[index].value) v = static_cast<Real>(normal(rng) * stddev);
  };
  std::size_t in = params.input_dim;
  for (std::size_t s = 0; s < params.mlp_dims.size(); ++s) {
    fill(dense_index(s).weight, 1.0 / std::sqrt(static_cast<double>(in)));
    in = params.mlp_dims[s];
  }
  for (std::size_t br = 0; br < 2; ++br) {
    const auto idx = branch_index(params, br);
    std::size_t cin = params.reshape_channels;
    for (std::size_t b = 0; b < params.blocks.size(); ++b) {
      const auto& spec = params.blocks[b];
      const double taps = static_cast<double>(cin * spec.kernel[0] * spec.kernel[1]) /
                          static_cast<double>(spec.stride[0] * spec.stride[1]);
      fill(idx.blocks[b].weight, 1.0 / std::sqrt(std::max(taps, 1.0)));
      cin = spec.out_channels;
    }
    fill(idx.final_weight, 1.0 / std::sqrt(9.0 * static_cast<double>(cin)));
  }
  return g;
}

template <typename Real>
SpectrogramPlanes<Real> SpectrogramGenerator<Real>::run(std::span<const Real> feature,
                                                        bool train_mode, std::uint64_t seed,
                                                        Tape* tape) const {
  if (feature.size() != params_.input_dim)
    throw Error(Errc::shape_mismatch, "feature length " + std::to_string(feature.size()) +
                                          " != generator input_dim " +
                                          std::to_string(params_.input_dim));
  const bool dropout = train_mode && params_.dropout > 0.0f;
  std::mt19937_64 rng(seed);

  std::vector<Real> x(feature.begin(), feature.end());
  if (tape) tape->mlp.resize(params_.mlp_dims.size());
  for (std::size_t s = 0; s < params_.mlp_dims.size(); ++s) {
    const auto idx = dense_index(s);
    const std::size_t out_dim = params_.mlp_dims[s];
    const std::size_t in_dim = x.size();
    const auto& w = weights_[idx.weight].value;
    const auto& gain = weights_[idx.gain].value;
    const auto& offset = weights_[idx.offset].value;
    std::vector<Real> z(weights_[idx.bias].value);
    for (std::size_t o = 0; o < out_dim; ++o) {
      const Real* row = w.data() + o * in_dim;
      Real acc = 0;
      for (std::size_t i = 0; i < in_dim; ++i) acc += row[i] * x[i];
      z[o] += acc;
    }
    std::vector<Real> xhat(out_dim);
    const Real inv_std = normalize(z.data(), out_dim, xhat.data());
    std::vector<Real> pre(out_dim), act(out_dim);
    for (std::size_t o = 0; o < out_dim; ++o) {
      pre[o] = gain[o] * xhat[o] + offset[o];
      act[o] = pre[o] > 0 ? pre[o] : static_cast<Real>(kLeakySlope) * pre[o];
    }
    std::vector<Real> mask;
    if (dropout) {
      mask = dropout_mask<Real>(out_dim, params_.dropout, rng);
      for (std::size_t o = 0; o < out_dim; ++o) act[o] *= mask[o];
    }
    if (tape) {
      auto& d = tape->mlp[s];
      d.in = std::move(x);
      d.xhat = std::move(xhat);
      d.pre_act = std::move(pre);
      d.mask = std::move(mask);
      d.inv_std = inv_std;
    }
    x = std::move(act);
  }

  const auto [nat_h, nat_w] = params_.natural_output();
  SpectrogramPlanes<Real> out;
  out.bins = params_.output_bins;
  out.frames = params_.output_frames;
  for (std::size_t br = 0; br < 2; ++br) {
    const auto idx = branch_index(params_, br);
    std::vector<Real> h = x;
    std::size_t c = params_.reshape_channels, hh = params_.reshape_height,
                ww = params_.reshape_width;
    if (tape) tape->branches[br].blocks.resize(params_.blocks.size());
    for (std::size_t b = 0; b < params_.blocks.size(); ++b) {
      const auto& spec = params_.blocks[b];
      const ConvGeom g = make_geom(c, spec.out_channels, hh, ww, spec);
      std::vector<Real> u(g.out_size());
      deconv_forward(g, h.data(), weights_[idx.blocks[b].weight].value.data(),
                     static_cast<const Real*>(nullptr), u.data());
      const std::size_t plane = g.out_h * g.out_w;
      const auto& gain = weights_[idx.blocks[b].gain].value;
      const auto& offset = weights_[idx.blocks[b].offset].value;
      std::vector<Real> xhat(u.size()), pre(u.size()), act(u.size()), inv_std(g.cout);
      for (std::size_t co = 0; co < g.cout; ++co) {
        inv_std[co] = normalize(u.data() + co * plane, plane, xhat.data() + co * plane);
        for (std::size_t i = co * plane; i < (co + 1) * plane; ++i) {
          pre[i] = gain[co] * xhat[i] + offset[co];
          act[i] = pre[i] > 0 ? pre[i] : Real(0);
        }
      }
      std::vector<Real> mask;
      if (dropout) {
        mask = dropout_mask<Real>(act.size(), params_.dropout, rng);
        for (std::size_t i = 0; i < act.size(); ++i) act[i] *= mask[i];
      }
      if (tape) {
        auto& blk = tape->branches[br].blocks[b];
        blk.geom = g;
        blk.in = std::move(h);
        blk.xhat = std::move(xhat);
        blk.pre_act = std::move(pre);
        blk.mask = std::move(mask);
        blk.inv_std = std::move(inv_std);
      }
      h = std::move(act);
      c = g.cout;
      hh = g.out_h;
      ww = g.out_w;
    }
    const ConvGeom fg = make_geom(c, 1, hh, ww, closing_spec());
    std::vector<Real> natural(fg.out_size());
    deconv_forward(fg, h.data(), weights_[idx.final_weight].value.data(),
                   weights_[idx.final_bias].value.data(), natural.data());
    if (tape) {
      tape->branches[br].final_geom = fg;
      tape->branches[br].final_in = std::move(h);
    }

    auto& plane = br == 0 ? out.real : out.imag;
    plane.assign(out.bins * out.frames, Real(0));
    for (std::size_t r = 0; r < out.bins; ++r) {
      const auto sr = crop_source(r, nat_h, out.bins);
      if (sr < 0) continue;
      for (std::size_t f = 0; f < out.frames; ++f) {
        const auto sf = crop_source(f, nat_w, out.frames);
        if (sf < 0) continue;
        plane[r * out.frames + f] =
            natural[static_cast<std::size_t>(sr) * nat_w + static_cast<std::size_t>(sf)];
      }
    }
  }
  return out;
}

template <typename Real>
SpectrogramPlanes<Real> SpectrogramGenerator<Real>::forward(std::span<const Real> feature,
                                                            bool train_mode, std::uint64_t seed) {
  auto tape = std::make_shared<Tape>();
  auto out = run(feature, train_mode, seed, tape.get());
  tape_ = std::move(tape);
  return out;
}

template <typename Real>
SpectrogramPlanes<Real> SpectrogramGenerator<Real>::infer(std::span<const Real> feature) const {
  return run(feature, false, 0, nullptr);
}

template <typename Real>
void SpectrogramGenerator<Real>::backward(std::span<const Real> grad_real,
                                          std::span<const Real> grad_imag, ParamSet<Real>& grads,
                                          std::vector<Real>* grad_feature) const {
  if (!tape_) throw Error(Errc::no_forward_pass, "backward() called before forward()");
  weights_.require_same_layout(grads);
  const std::size_t plane_size = params_.output_bins * params_.output_frames;
  if (grad_real.size() != plane_size || grad_imag.size() != plane_size)
    throw Error(Errc::shape_mismatch, "upstream gradient does not match the output planes");
  const Tape& tape = *tape_;
  const auto [nat_h, nat_w] = params_.natural_output();

  std::vector<Real> grad_reshaped(params_.mlp_dims.back(), Real(0));
  for (std::size_t br = 0; br < 2; ++br) {
    const auto idx = branch_index(params_, br);
    const auto& bt = tape.branches[br];
    const auto upstream = br == 0 ? grad_real : grad_imag;

    std::vector<Real> d(nat_h * nat_w, Real(0));
    for (std::size_t r = 0; r < params_.output_bins; ++r) {
      const auto sr = crop_source(r, nat_h, params_.output_bins);
      if (sr < 0) continue;
      for (std::size_t f = 0; f < params_.output_frames; ++f) {
        const auto sf = crop_source(f, nat_w, params_.output_frames);
        if (sf < 0) continue;
        d[static_cast<std::size_t>(sr) * nat_w + static_cast<std::size_t>(sf)] +=
            upstream[r * params_.output_frames + f];
      }
    }

    std::vector<Real> din(bt.final_geom.in_size());
    deconv_backward(bt.final_geom, bt.final_in.data(), weights_[idx.final_weight].value.data(),
                    d.data(), grads[idx.final_weight].value.data(),
                    grads[idx.final_bias].value.data(), din.data());
    d = std::move(din);

    for (std::size_t b = params_.blocks.size(); b-- > 0;) {
      const auto& blk = bt.blocks[b];
      const ConvGeom& g = blk.geom;
      const std::size_t plane = g.out_h * g.out_w;
      const auto& gain = weights_[idx.blocks[b].gain].value;
      auto& ggain = grads[idx.blocks[b].gain].value;
      auto& goffset = grads[idx.blocks[b].offset].value;
      std::vector<Real> grad_u(g.out_size());
      std::vector<Real> grad_xhat(plane);
      for (std::size_t co = 0; co < g.cout; ++co) {
        for (std::size_t i = 0; i < plane; ++i) {
          const std::size_t k = co * plane + i;
          Real dy = d[k];
          if (!blk.mask.empty()) dy *= blk.mask[k];
          if (!(blk.pre_act[k] > 0)) dy = 0;
          ggain[co] += dy * blk.xhat[k];
          goffset[co] += dy;
          grad_xhat[i] = dy * gain[co];
        }
        normalize_backward(blk.xhat.data() + co * plane, grad_xhat.data(), plane,
                           blk.inv_std[co], grad_u.data() + co * plane);
      }
      std::vector<Real> grad_in(g.in_size());
      deconv_backward(g, blk.in.data(), weights_[idx.blocks[b].weight].value.data(),
                      grad_u.data(), grads[idx.blocks[b].weight].value.data(),
                      static_cast<Real*>(nullptr), grad_in.data());
      d = std::move(grad_in);
    }
    for (std::size_t i = 0; i < d.size(); ++i) grad_reshaped[i] += d[i];
  }

  std::vector<Real> d = std::move(grad_reshaped);
  for (std::size_t s = params_.mlp_dims.size(); s-- > 0;) {
    const auto idx = dense_index(s);
    const auto& st = tape.mlp[s];
    const std::size_t out_dim = params_.mlp_dims[s];
    const std::size_t in_dim = st.in.size();
    const auto& gain = weights_[idx.gain].value;
    auto& ggain = grads[idx.gain].value;
    auto& goffset = grads[idx.offset].value;
    std::vector<Real> grad_xhat(out_dim);
    for (std::size_t o = 0; o < out_dim; ++o) {
      Real dy = d[o];
      if (!st.mask.empty()) dy *= st.mask[o];
      if (!(st.pre_act[o] > 0)) dy *= static_cast<Real>(kLeakySlope);
      ggain[o] += dy * st.xhat[o];
      goffset[o] += dy;
      grad_xhat[o] = dy * gain[o];
    }
    std::vector<Real> grad_z(out_dim);
    normalize_backward(st.xhat.data(), grad_xhat.data(), out_dim, st.inv_std, grad_z.data());
    const auto& w = weights_[idx.weight].value;
    auto& gw = grads[idx.weight].value;
    auto& gb = grads[idx.bias].value;
    std::vector<Real> grad_in(in_dim, Real(0));
    for (std::size_t o = 0; o < out_dim; ++o) {
      gb[o] += grad_z[o];
      const Real* row = w.data() + o * in_dim;
      Real* grow = gw.data() + o * in_dim;
      for (std::size_t i = 0; i < in_dim; ++i) {
        grow[i] += grad_z[o] * st.in[i];
        grad_in[i] += grad_z[o] * row[i];
      }
    }
    d = std::move(grad_in);
  }
  if (grad_feature) *grad_feature = std::move(d);
}

template class SpectrogramGenerator<float>;
template class SpectrogramGenerator<double>;

namespace {
ComplexSpectrogram wrap(const SpectrogramPlanes<float>& planes, int sample_rate, int n_fft,
                        int hop) {
  ComplexSpectrogram s;
  s.real = Tensor({planes.bins, planes.frames}, planes.real);
  s.imag = Tensor({planes.bins, planes.frames}, planes.imag);
  s.sample_rate = sample_rate;
  s.n_fft = n_fft;
  s.hop = hop;
  return s;
}
}  // namespace

ComplexSpectrogram generate_spectrogram(const SpectrogramGenerator<float>& generator,
                                        const FeatureVector& feature, int sample_rate,
                                        int n_fft, int hop) {
  return wrap(generator.infer(feature.values), sample_rate, n_fft, hop);
}

ComplexSpectrogram generate_spectrogram(SpectrogramGenerator<float>& generator,
                                        const FeatureVector& feature, bool train_mode,
                                        std::uint64_t seed, int sample_rate, int n_fft, int hop) {
  return wrap(generator.forward(feature.values, train_mode, seed), sample_rate, n_fft, hop);
}

void save_generator(const SpectrogramGenerator<float>& generator,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["generator"] = generator.params();
  manifest["parameters"] = nlohmann::json::array();
  for (const auto& p : generator.weights()) {
    manifest["parameters"].push_back({{"name", p.name}, {"shape", p.shape}});
    tensor_write(Tensor(p.shape, p.value), dir / (p.name + ".isvt"));
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(Errc::io, "cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

SpectrogramGenerator<float> load_generator(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error(Errc::io, "missing manifest.json in " + dir.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::bad_format, std::string("generator manifest: ") + e.what());
  }
  SpectrogramGenerator<float> g(manifest.at("generator").get<GeneratorParams>());
  for (auto& p : g.weights()) {
    Tensor t = tensor_read(dir / (p.name + ".isvt"));
    if (t.shape() != p.shape)
      throw Error(Errc::shape_mismatch, "parameter " + p.name + " stored as " +
                                            shape_string(t.shape()) + ", expected " +
                                            shape_string(p.shape));
    p.value = std::move(t.storage());
  }
  return g;
}

}  // namespace signvoice
