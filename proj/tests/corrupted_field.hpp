#pragma once

// Test decorator: a field identical to `base` except that phi^t is shifted
// by `shift` at the single point (pos, t).

#include "calx/fields.hpp"

namespace calx {

class CorruptedField final : public PiecewiseField {
 public:
  CorruptedField(const PiecewiseField& base, double pos, double t, double shift)
      : PiecewiseField(base.kind() + "-corrupted", base.geometry(), base.dimension(), base.beta(),
                       base.volume_coefficient(), base.pos_min(), base.pos_max(), base.t_max()),
        base_(base),
        pos_(pos),
        t_(t),
        shift_(shift) {}

  std::vector<std::string> region_names() const override { return base_.region_names(); }
  int region(double pos, double t) const override { return base_.region(pos, t); }
  FieldValue eval_region(int region, double pos, double t) const override {
    FieldValue v = base_.eval_region(region, pos, t);
    if (pos == pos_ && t == t_) v.t += shift_;
    return v;
  }
  double antiderivative(double pos, double t) const override { return base_.antiderivative(pos, t); }
  std::vector<double> t_breaks(double pos) const override { return base_.t_breaks(pos); }
  std::vector<GraphInterface> graph_interfaces() const override { return base_.graph_interfaces(); }
  std::vector<SphereInterface> sphere_interfaces() const override { return base_.sphere_interfaces(); }
  std::vector<CalibratedGraph> calibrated_graphs() const override { return base_.calibrated_graphs(); }
  bool points_inward() const override { return base_.points_inward(); }
  nlohmann::json parameters() const override { return base_.parameters(); }

 private:
  const PiecewiseField& base_;
  double pos_;
  double t_;
  double shift_;
};

}  // namespace calx
