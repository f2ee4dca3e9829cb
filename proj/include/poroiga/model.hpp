#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace poroiga {

/// Elastic and flow parameters of one material.
struct MaterialParams {
  double youngs_modulus = 1.0;   // E [Pa]
  double poisson_ratio = 0.0;    // nu [-]
  double biot_alpha = 1.0;       // alpha [-]
  double storativity = 0.0;      // c [1/Pa]
  Eigen::Matrix2d mobility = Eigen::Matrix2d::Identity();  // k / gamma_f [m^2/(Pa s)]
  double density = 0.0;          // rho, overall [kg/m^3]
  double fluid_density = 0.0;    // rho_f [kg/m^3]
  Eigen::Vector2d body_force = Eigen::Vector2d::Zero();  // b [N/kg]

  /// Throws ArgumentError when an invariant is violated.
  void validate() const;

  bool operator==(const MaterialParams&) const = default;
};

/// Plane-strain Voigt elasticity matrix (xx, yy, xy with engineering shear).
Eigen::Matrix3d elasticity_matrix(double E, double nu);

/// alpha = 1 - K_t / K_s.
double biot_coefficient(double bulk_modulus_drained, double bulk_modulus_solid);

/// c = (alpha - n) / K_s + n / K_f. Infinite moduli are allowed.
double storativity(double alpha, double porosity, double bulk_modulus_solid, double bulk_modulus_fluid);

/// c_v = (1 - nu) E kappa / ((1 + nu)(1 - 2 nu)).
double consolidation_coefficient(double E, double nu, double mobility);

/// One-dimensional critical time step dy^2 / (6 theta c_v).
double critical_time_step(double span_height, double cv, double theta = 1.0);

struct MaterialLayer {
  double y_min;
  double y_max;
  MaterialParams params;
  bool operator==(const MaterialLayer&) const = default;
};

/// Horizontal layers stacked bottom to top, tiling [y_min, y_max] exactly.
class MaterialLayerSet {
 public:
  MaterialLayerSet() = default;
  explicit MaterialLayerSet(std::vector<MaterialLayer> layers);
  static MaterialLayerSet single(double height, const MaterialParams& params);

  /// Parameters of the layer containing y. Exactly on an interface the layer
  /// above wins; the top boundary belongs to the top layer.
  const MaterialParams& lookup(double y) const;

  /// Interior layer boundaries, bottom to top.
  std::vector<double> interfaces() const;

  const std::vector<MaterialLayer>& layers() const { return layers_; }
  double bottom() const { return layers_.front().y_min; }
  double top() const { return layers_.back().y_max; }

  bool operator==(const MaterialLayerSet&) const = default;

 private:
  std::vector<MaterialLayer> layers_;
};

/// Rectangular column [0, w] x [0, h] with the oedometer-type boundary
/// conditions: loaded drained top (t_y = -p0, u_x = 0, p = 0), roller sides
/// (u_x = 0, q = 0) and a fixed impervious bottom (u = 0, q = 0).
struct ProblemSpec {
  std::string name;
  double width = 1.0;
  double height = 1.0;
  MaterialLayerSet layers;
  double load = 1.0;  // p0 [Pa]
  double dt = 1.0;    // [s]
  int steps = 1;
  double theta = 1.0;

  // Prescribed Dirichlet values and Neumann fluxes. Only zero lifts are
  // supported by the solver; the fields exist so that configs can state them.
  double prescribed_displacement = 0.0;
  double prescribed_pressure = 0.0;
  double side_flux = 0.0;
  double bottom_flux = 0.0;

  void validate() const;
  bool operator==(const ProblemSpec&) const = default;
};

/// Terzaghi column: h = 8 mm, p0 = 1 MPa, E = 6 MPa, nu = 0.4, alpha = 1, c = 0.
ProblemSpec terzaghi_preset();
/// Unit-square convergence study: E = 2/3, nu = 0.25, kappa = 1, alpha = 1, c = 0, p0 = 1.
ProblemSpec convergence_preset();
/// Low-permeability layer (kappa = 1e-8) between two kappa = 1 layers at y in [0.25, 0.75].
ProblemSpec haga_preset();

/// Top settlement of a drained one-dimensional column under load p0.
double oedometer_settlement(double load, double height, double E, double nu);

}  // namespace poroiga
