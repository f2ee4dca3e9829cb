#include "poroiga/model.hpp"

#include <cmath>
#include <limits>

#include "poroiga/errors.hpp"

namespace poroiga {

void MaterialParams::validate() const {
  if (!(youngs_modulus > 0.0)) throw ArgumentError("Young's modulus must be positive");
  if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5))
    throw ArgumentError("Poisson ratio must lie in (-1, 0.5)");
  if (!(biot_alpha >= 0.0 && biot_alpha <= 1.0)) throw ArgumentError("Biot coefficient must lie in [0, 1]");
  if (!(storativity >= 0.0)) throw ArgumentError("storativity must be non-negative");
  if (!mobility.isApprox(mobility.transpose()) || !(mobility(0, 0) > 0.0) || !(mobility.determinant() > 0.0))
    throw ArgumentError("Darcy mobility must be symmetric positive definite");
}

Eigen::Matrix3d elasticity_matrix(double E, double nu) {
  if (std::abs(1.0 - 2.0 * nu) < 1e-14) throw DomainError("elasticity matrix is singular at nu = 0.5");
  const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
  Eigen::Matrix3d D;
  D << 1.0 - nu, nu, 0.0,
       nu, 1.0 - nu, 0.0,
       0.0, 0.0, 0.5 * (1.0 - 2.0 * nu);
  return f * D;
}

double biot_coefficient(double bulk_modulus_drained, double bulk_modulus_solid) {
  if (!(bulk_modulus_drained > 0.0)) throw ArgumentError("drained bulk modulus must be positive");
  if (bulk_modulus_drained > bulk_modulus_solid)
    throw ArgumentError("drained bulk modulus exceeds solid bulk modulus");
  if (std::isinf(bulk_modulus_solid)) return 1.0;
  return 1.0 - bulk_modulus_drained / bulk_modulus_solid;
}

double storativity(double alpha, double porosity, double bulk_modulus_solid, double bulk_modulus_fluid) {
  if (!(porosity >= 0.0 && porosity <= 1.0)) throw ArgumentError("porosity must lie in [0, 1]");
  if (alpha < porosity) throw ArgumentError("Biot coefficient must not be smaller than porosity");
  if (!(bulk_modulus_solid > 0.0 && bulk_modulus_fluid > 0.0))
    throw ArgumentError("bulk moduli must be positive");
  return (alpha - porosity) / bulk_modulus_solid + porosity / bulk_modulus_fluid;
}

double consolidation_coefficient(double E, double nu, double mobility) {
  if (std::abs(1.0 - 2.0 * nu) < 1e-14) throw DomainError("consolidation coefficient undefined at nu = 0.5");
  if (!(mobility > 0.0)) throw ArgumentError("mobility must be positive");
  return (1.0 - nu) * E * mobility / ((1.0 + nu) * (1.0 - 2.0 * nu));
}

double critical_time_step(double span_height, double cv, double theta) {
  if (!(theta > 0.0)) throw ArgumentError("critical time step requires theta > 0");
  if (!(span_height > 0.0 && cv > 0.0)) throw ArgumentError("span height and c_v must be positive");
  return span_height * span_height / (6.0 * theta * cv);
}

MaterialLayerSet::MaterialLayerSet(std::vector<MaterialLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ArgumentError("layer set is empty");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!(layers_[i].y_max > layers_[i].y_min)) throw ArgumentError("layer has non-positive thickness");
    if (i > 0 && layers_[i].y_min != layers_[i - 1].y_max)
      throw ArgumentError("layers leave a gap or overlap at y = " + std::to_string(layers_[i].y_min));
    layers_[i].params.validate();
  }
}

MaterialLayerSet MaterialLayerSet::single(double height, const MaterialParams& params) {
  return MaterialLayerSet({{0.0, height, params}});
}

const MaterialParams& MaterialLayerSet::lookup(double y) const {
  if (!(y >= bottom() && y <= top()))
    throw DomainError("y = " + std::to_string(y) + " outside the layered domain");
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
    if (y >= it->y_min) return it->params;
  return layers_.front().params;
}

std::vector<double> MaterialLayerSet::interfaces() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < layers_.size(); ++i) out.push_back(layers_[i].y_min);
  return out;
}

void ProblemSpec::validate() const {
  if (!(width > 0.0 && height > 0.0)) throw ArgumentError("domain dimensions must be positive");
  if (!(load >= 0.0)) throw ArgumentError("load p0 must be non-negative");
  if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
  if (steps < 0) throw ArgumentError("step count must be non-negative");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ArgumentError("theta must lie in [0, 1]");
  if (layers.layers().empty()) throw ArgumentError("problem has no material layers");
  if (std::abs(layers.bottom()) > 1e-12 * height || std::abs(layers.top() - height) > 1e-12 * height)
    throw ArgumentError("layers do not tile the domain height");
}

ProblemSpec terzaghi_preset() {
  MaterialParams m;
  m.youngs_modulus = 6.0e6;
  m.poisson_ratio = 0.4;
  m.biot_alpha = 1.0;
  m.storativity = 0.0;
  m.mobility = 1.962e-14 * Eigen::Matrix2d::Identity();
  ProblemSpec spec;
  spec.name = "terzaghi";
  spec.width = 8.0e-3;
  spec.height = 8.0e-3;
  spec.layers = MaterialLayerSet::single(spec.height, m);
  spec.load = 1.0e6;
  const double cv = consolidation_coefficient(m.youngs_modulus, m.poisson_ratio, 1.962e-14);
  spec.dt = critical_time_step(spec.height / 72.0, cv);
  spec.steps = 5000;
  return spec;
}

ProblemSpec convergence_preset() {
  MaterialParams m;
  m.youngs_modulus = 2.0 / 3.0;
  m.poisson_ratio = 0.25;
  m.biot_alpha = 1.0;
  m.storativity = 0.0;
  m.mobility = Eigen::Matrix2d::Identity();
  ProblemSpec spec;
  spec.name = "convergence";
  spec.width = 1.0;
  spec.height = 1.0;
  spec.layers = MaterialLayerSet::single(1.0, m);
  spec.load = 1.0;
  const double cv = consolidation_coefficient(m.youngs_modulus, m.poisson_ratio, 1.0);
  spec.dt = 1e-8 * spec.height * spec.height / cv;
  spec.steps = 1;
  return spec;
}

ProblemSpec haga_preset() {
  MaterialParams outer;
  outer.youngs_modulus = 0.67;
  outer.poisson_ratio = 0.25;
  outer.biot_alpha = 1.0;
  outer.storativity = 0.0;
  outer.mobility = Eigen::Matrix2d::Identity();
  MaterialParams inner = outer;
  inner.mobility = 1.0e-8 * Eigen::Matrix2d::Identity();
  ProblemSpec spec;
  spec.name = "haga";
  spec.width = 1.0;
  spec.height = 1.0;
  spec.layers = MaterialLayerSet({{0.0, 0.25, outer}, {0.25, 0.75, inner}, {0.75, 1.0, outer}});
  spec.load = 1.0;
  spec.dt = 1.0;
  spec.steps = 2;
  return spec;
}

double oedometer_settlement(double load, double height, double E, double nu) {
  return -load * height * (1.0 + nu) * (1.0 - 2.0 * nu) / (E * (1.0 - nu));
}

}  // namespace poroiga
