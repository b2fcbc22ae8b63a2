/* Copyright 2026 The Fintick Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fintick/losses.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fintick {
namespace {

// Corner-wise quantities shared by the IoU-family gradients. All gradient
// arrays are ordered [d/dx_min, d/dy_min, d/dx_max, d/dy_max] of pred.
// At min/max ties the pred corner is taken as the binding one (one-sided
// derivative from the interior).
struct IouParts {
  double inter = 0.0;
  double uni = 0.0;
  double iou = 0.0;
  std::array<double, 4> d_inter{};
  std::array<double, 4> d_union{};
  std::array<double, 4> d_iou{};
  // Enclosing box.
  double cw = 0.0;
  double ch = 0.0;
  std::array<double, 4> d_cw{};
  std::array<double, 4> d_ch{};
};

IouParts iou_parts(const Box& p, const Box& g) {
  IouParts out;
  const double iw =
      std::min(p.x_max(), g.x_max()) - std::max(p.x_min(), g.x_min());
  const double ih =
      std::min(p.y_max(), g.y_max()) - std::max(p.y_min(), g.y_min());
  const bool overlapping = iw > 0.0 && ih > 0.0;
  out.inter = overlapping ? iw * ih : 0.0;

  if (overlapping) {
    out.d_inter[0] = (p.x_min() >= g.x_min() ? -1.0 : 0.0) * ih;
    out.d_inter[1] = (p.y_min() >= g.y_min() ? -1.0 : 0.0) * iw;
    out.d_inter[2] = (p.x_max() <= g.x_max() ? 1.0 : 0.0) * ih;
    out.d_inter[3] = (p.y_max() <= g.y_max() ? 1.0 : 0.0) * iw;
  }

  const double pw = p.width();
  const double ph = p.height();
  const std::array<double, 4> d_pred_area{-ph, -pw, ph, pw};

  out.uni = p.area() + g.area() - out.inter;
  for (int i = 0; i < 4; ++i) {
    out.d_union[i] = d_pred_area[i] - out.d_inter[i];
  }

  out.iou = out.uni > 0.0 ? out.inter / out.uni : 0.0;
  if (out.uni > 0.0) {
    const double u2 = out.uni * out.uni;
    for (int i = 0; i < 4; ++i) {
      out.d_iou[i] = (out.d_inter[i] * out.uni - out.inter * out.d_union[i]) / u2;
    }
  }

  out.cw = std::max(p.x_max(), g.x_max()) - std::min(p.x_min(), g.x_min());
  out.ch = std::max(p.y_max(), g.y_max()) - std::min(p.y_min(), g.y_min());
  out.d_cw[0] = p.x_min() <= g.x_min() ? -1.0 : 0.0;
  out.d_cw[2] = p.x_max() >= g.x_max() ? 1.0 : 0.0;
  out.d_ch[1] = p.y_min() <= g.y_min() ? -1.0 : 0.0;
  out.d_ch[3] = p.y_max() >= g.y_max() ? 1.0 : 0.0;
  return out;
}

void require_positive_area(const Box& gt, const char* who) {
  if (gt.width() <= 0.0 || gt.height() <= 0.0) {
    throw std::invalid_argument(std::string(who) +
                                ": ground truth must have positive area");
  }
}

double aspect_term(const Box& p, const Box& g, CiouAspectForm form) {
  const double q = std::atan(g.width() / g.height()) -
                   std::atan(p.width() / p.height());
  if (form == CiouAspectForm::kSquared) {
    constexpr double k = 4.0 / (std::numbers::pi * std::numbers::pi);
    return k * q * q;
  }
  return (4.0 / std::numbers::pi) * q;
}

double ciou_value_frozen_alpha(const Box& p, const Box& g, double alpha,
                               CiouAspectForm form) {
  const IouParts parts = iou_parts(p, g);
  const double c2 = parts.cw * parts.cw + parts.ch * parts.ch;
  const double rho = c2 > 0.0 ? center_distance_sq(p, g) / c2 : 0.0;
  return 1.0 - parts.iou + rho + alpha * aspect_term(p, g, form);
}

}  // namespace

LossEval smooth_l1_loss(const RegressionTarget& t,
                        const RegressionTarget& t_star) {
  if (!t.finite() || !t_star.finite()) {
    throw std::invalid_argument("smooth_l1_loss: non-finite target");
  }
  const std::array<double, 4> d{t.tx - t_star.tx, t.ty - t_star.ty,
                                t.tw - t_star.tw, t.th - t_star.th};
  LossEval out;
  for (int i = 0; i < 4; ++i) {
    const double a = std::abs(d[i]);
    if (a < 1.0) {
      out.value += 0.5 * d[i] * d[i];
      out.gradient[i] = d[i];
    } else {
      out.value += a - 0.5;
      out.gradient[i] = d[i] > 0.0 ? 1.0 : -1.0;
    }
  }
  return out;
}

LossEval iou_loss(const Box& pred, const Box& gt) {
  require_positive_area(gt, "iou_loss");
  const IouParts parts = iou_parts(pred, gt);
  LossEval out;
  out.value = 1.0 - parts.iou;
  for (int i = 0; i < 4; ++i) {
    out.gradient[i] = -parts.d_iou[i];
  }
  return out;
}

LossEval giou_loss(const Box& pred, const Box& gt) {
  require_positive_area(gt, "giou_loss");
  const IouParts parts = iou_parts(pred, gt);
  const double c = parts.cw * parts.ch;

  LossEval out;
  out.value = 1.0 - parts.iou;
  for (int i = 0; i < 4; ++i) {
    out.gradient[i] = -parts.d_iou[i];
  }
  if (c > 0.0) {
    out.value += (c - parts.uni) / c;
    const double c2 = c * c;
    for (int i = 0; i < 4; ++i) {
      const double dc = parts.d_cw[i] * parts.ch + parts.d_ch[i] * parts.cw;
      out.gradient[i] += (parts.uni * dc - c * parts.d_union[i]) / c2;
    }
  }
  return out;
}

LossEval ciou_loss(const Box& pred, const Box& gt, CiouTerms* terms_out,
                   CiouAspectForm form) {
  require_positive_area(gt, "ciou_loss");
  if (pred.width() <= 0.0 || pred.height() <= 0.0) {
    throw std::invalid_argument("ciou_loss: degenerate predicted box");
  }

  const IouParts parts = iou_parts(pred, gt);

  // Center-distance penalty rho = p^2 / c^2 over the enclosing diagonal.
  const double c2 = parts.cw * parts.cw + parts.ch * parts.ch;
  const double p2 = center_distance_sq(pred, gt);
  const double rho = p2 / c2;
  const double dx = pred.center_x() - gt.center_x();
  const double dy = pred.center_y() - gt.center_y();
  const std::array<double, 4> d_p2{dx, dy, dx, dy};
  std::array<double, 4> d_rho{};
  for (int i = 0; i < 4; ++i) {
    const double d_c2 =
        2.0 * (parts.cw * parts.d_cw[i] + parts.ch * parts.d_ch[i]);
    d_rho[i] = (d_p2[i] * c2 - p2 * d_c2) / (c2 * c2);
  }

  // Aspect-ratio consistency term.
  const double w = pred.width();
  const double h = pred.height();
  const double q =
      std::atan(gt.width() / gt.height()) - std::atan(w / h);
  const double denom_wh = w * w + h * h;
  double v = 0.0;
  double dv_dw = 0.0;
  double dv_dh = 0.0;
  if (form == CiouAspectForm::kSquared) {
    constexpr double k = 4.0 / (std::numbers::pi * std::numbers::pi);
    v = k * q * q;
    dv_dw = 2.0 * k * q * (-h / denom_wh);
    dv_dh = 2.0 * k * q * (w / denom_wh);
  } else {
    constexpr double k = 4.0 / std::numbers::pi;
    v = k * q;
    dv_dw = k * (-h / denom_wh);
    dv_dh = k * (w / denom_wh);
  }
  const std::array<double, 4> d_v{-dv_dw, -dv_dh, dv_dw, dv_dh};

  // Trade-off weight; no gradient flows through it.
  const double alpha_denom = (1.0 - parts.iou) + v;
  const double alpha =
      std::abs(alpha_denom) > 1e-12 ? v / alpha_denom : 0.0;

  LossEval out;
  out.value = 1.0 - parts.iou + rho + alpha * v;
  for (int i = 0; i < 4; ++i) {
    out.gradient[i] = -parts.d_iou[i] + d_rho[i] + alpha * d_v[i];
  }
  if (terms_out != nullptr) {
    terms_out->iou = parts.iou;
    terms_out->center_penalty = rho;
    terms_out->v = v;
    terms_out->alpha = alpha;
  }
  return out;
}

double loss_value(LossKind kind, const Box& pred, const Box& gt) {
  switch (kind) {
    case LossKind::kIoU:
      return iou_loss(pred, gt).value;
    case LossKind::kGIoU:
      return giou_loss(pred, gt).value;
    case LossKind::kCIoU:
      return ciou_loss(pred, gt).value;
    case LossKind::kSmoothL1:
      break;
  }
  throw std::invalid_argument("loss_value: box losses only");
}

std::array<double, 4> finite_difference_gradient(LossKind kind,
                                                 const Box& pred,
                                                 const Box& gt,
                                                 double epsilon) {
  if (epsilon <= 0.0) {
    throw std::invalid_argument("finite_difference_gradient: epsilon <= 0");
  }
  double frozen_alpha = 0.0;
  if (kind == LossKind::kCIoU) {
    CiouTerms terms;
    ciou_loss(pred, gt, &terms);
    frozen_alpha = terms.alpha;
  }
  const auto eval = [&](const Box& p) {
    if (kind == LossKind::kCIoU) {
      return ciou_value_frozen_alpha(p, gt, frozen_alpha,
                                     CiouAspectForm::kSquared);
    }
    return loss_value(kind, p, gt);
  };

  std::array<double, 4> grad{};
  std::array<double, 4> c{pred.x_min(), pred.y_min(), pred.x_max(),
                          pred.y_max()};
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> lo = c;
    std::array<double, 4> hi = c;
    lo[i] -= epsilon;
    hi[i] += epsilon;
    const double f_lo = eval(Box(lo[0], lo[1], lo[2], lo[3]));
    const double f_hi = eval(Box(hi[0], hi[1], hi[2], hi[3]));
    grad[i] = (f_hi - f_lo) / (2.0 * epsilon);
  }
  return grad;
}

std::array<double, 4> finite_difference_smooth_l1(
    const RegressionTarget& t, const RegressionTarget& t_star,
    double epsilon) {
  if (epsilon <= 0.0) {
    throw std::invalid_argument("finite_difference_smooth_l1: epsilon <= 0");
  }
  std::array<double, 4> grad{};
  std::array<double, 4> c{t.tx, t.ty, t.tw, t.th};
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> lo = c;
    std::array<double, 4> hi = c;
    lo[i] -= epsilon;
    hi[i] += epsilon;
    const RegressionTarget tl{lo[0], lo[1], lo[2], lo[3]};
    const RegressionTarget th{hi[0], hi[1], hi[2], hi[3]};
    grad[i] = (smooth_l1_loss(th, t_star).value -
               smooth_l1_loss(tl, t_star).value) /
              (2.0 * epsilon);
  }
  return grad;
}

double gradient_relative_error(const std::array<double, 4>& a,
                               const std::array<double, 4>& b) {
  double max_diff = 0.0;
  double max_mag = 1.0;
  for (int i = 0; i < 4; ++i) {
    max_diff = std::max(max_diff, std::abs(a[i] - b[i]));
    max_mag = std::max({max_mag, std::abs(a[i]), std::abs(b[i])});
  }
  return max_diff / max_mag;
}

bool near_corner_alignment(const Box& pred, const Box& gt, double margin) {
  const std::array<double, 2> px{pred.x_min(), pred.x_max()};
  const std::array<double, 2> gx{gt.x_min(), gt.x_max()};
  const std::array<double, 2> py{pred.y_min(), pred.y_max()};
  const std::array<double, 2> gy{gt.y_min(), gt.y_max()};
  for (double p : px) {
    for (double g : gx) {
      if (std::abs(p - g) < margin) return true;
    }
  }
  for (double p : py) {
    for (double g : gy) {
      if (std::abs(p - g) < margin) return true;
    }
  }
  return false;
}

}  // namespace fintick
