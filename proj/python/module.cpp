#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "oscwell/capacity.hpp"
#include "oscwell/cli.hpp"
#include "oscwell/invariant.hpp"
#include "oscwell/jump.hpp"
#include "oscwell/predict.hpp"
#include "oscwell/profile.hpp"
#include "oscwell/simulate.hpp"
#include "oscwell/verify.hpp"

namespace py = pybind11;
using namespace oscwell;

namespace {

using ModelPtr = std::shared_ptr<PotentialModel>;

}  // namespace

PYBIND11_MODULE(oscwell, m) {
  m.doc() = "periodically forced double-well diffusion laboratory";

  py::class_<PotentialModel, ModelPtr>(m, "PotentialModel")
      .def("v0", [](const PotentialModel& p, double x, double y) { return p.v0(x, y); })
      .def("drift", &PotentialModel::drift)
      .def_readonly("family", &PotentialModel::family)
      .def_readonly("base_depth", &PotentialModel::base_depth)
      .def_readonly("tilt_amplitude", &PotentialModel::tilt_amplitude)
      .def_readonly("tilt_phase", &PotentialModel::tilt_phase);
  m.def("make_tilted_quartic",
        [](double depth, double tilt, double phase) -> ModelPtr {
          return std::make_shared<PotentialModel>(make_tilted_quartic(depth, tilt, phase));
        },
        py::arg("base_depth") = 1.0, py::arg("tilt_amplitude") = 0.1,
        py::arg("tilt_phase") = 0.0);

  py::class_<WellGeometry>(m, "WellGeometry")
      .def_readonly("y", &WellGeometry::y)
      .def_readonly("x_minus", &WellGeometry::x_minus)
      .def_readonly("x_saddle", &WellGeometry::x_saddle)
      .def_readonly("x_plus", &WellGeometry::x_plus)
      .def_readonly("h_minus", &WellGeometry::h_minus)
      .def_readonly("h_plus", &WellGeometry::h_plus)
      .def_readonly("delta", &WellGeometry::delta)
      .def_readonly("omega_minus", &WellGeometry::omega_minus)
      .def_readonly("omega_plus", &WellGeometry::omega_plus)
      .def_readonly("omega0", &WellGeometry::omega0)
      .def_readonly("delta_bar", &WellGeometry::delta_bar);
  m.def("find_critical_points",
        [](const ModelPtr& model, double y, double sigma) {
          return find_critical_points(*model, y, sigma);
        },
        py::arg("model"), py::arg("y"),
        py::arg("sigma") = std::numeric_limits<double>::quiet_NaN());
  m.def("validate_assumptions", [](const ModelPtr& model, std::size_t y_points) {
    std::vector<double> grid(y_points);
    for (std::size_t k = 0; k < y_points; ++k) {
      grid[k] = static_cast<double>(k) / static_cast<double>(y_points);
    }
    const ValidationReport rep = validate_assumptions(*model, grid);
    py::list checks;
    for (const auto& c : rep.checks) {
      checks.append(py::make_tuple(c.name, c.pass, c.value));
    }
    return py::make_tuple(rep.pass, checks);
  }, py::arg("model"), py::arg("y_points") = 64);

  py::class_<RateSlice>(m, "RateSlice")
      .def_readonly("r_minus", &RateSlice::r_minus)
      .def_readonly("r_plus", &RateSlice::r_plus)
      .def_readonly("lambda1_kramers", &RateSlice::lambda1_kramers)
      .def_readonly("a", &RateSlice::a)
      .def_readonly("b", &RateSlice::b)
      .def_readonly("delta_bar", &RateSlice::delta_bar);
  m.def("kramers_rates",
        [](const WellGeometry& g, double sigma) { return kramers_rates(g, sigma); });

  py::class_<SliceSummary>(m, "SliceSummary")
      .def_readonly("y", &SliceSummary::y)
      .def_readonly("z0", &SliceSummary::z0)
      .def_readonly("n_committor", &SliceSummary::n_committor)
      .def_readonly("r_minus", &SliceSummary::r_minus)
      .def_readonly("r_plus", &SliceSummary::r_plus)
      .def_readonly("lambda1_kramers", &SliceSummary::lambda1_kramers)
      .def_readonly("lambda1_numeric", &SliceSummary::lambda1_numeric)
      .def_readonly("a", &SliceSummary::a)
      .def_readonly("b", &SliceSummary::b)
      .def_readonly("delta_bar", &SliceSummary::delta_bar);
  m.def("spectral_sweep",
        [](const ModelPtr& model, double sigma, std::size_t y_points, std::size_t x_points,
           bool with_numeric, std::size_t eigen_nodes) {
          return spectral_sweep(model, sigma, y_points, x_points, with_numeric, eigen_nodes);
        },
        py::arg("model"), py::arg("sigma"), py::arg("y_points") = 16,
        py::arg("x_points") = 1024, py::arg("with_numeric") = true,
        py::arg("eigen_nodes") = 2048);

  m.def("committor_h0",
        [](const ModelPtr& model, double sigma, double y, double x) {
          const FrozenSlice s = make_frozen_slice(model, y, sigma);
          return committor_h0(s, x);
        },
        py::arg("model"), py::arg("sigma"), py::arg("y"), py::arg("x"));
  m.def("partition_z0", [](const ModelPtr& model, double sigma, double y) {
    return partition_Z0(make_frozen_slice(model, y, sigma));
  });
  m.def("eigenvalues",
        [](const ModelPtr& model, double sigma, double y, std::size_t n_max,
           std::size_t nodes) {
          const FrozenSlice s = make_frozen_slice(model, y, sigma, 512);
          return eigen_solve(s, n_max, nodes).lambda;
        },
        py::arg("model"), py::arg("sigma"), py::arg("y"), py::arg("n_max") = 4,
        py::arg("nodes") = 2048);

  py::class_<RateProfile>(m, "RateProfile")
      .def_static("from_model",
                  [](const ModelPtr& model, double sigma, double epsilon,
                     std::size_t y_points) {
                    return RateProfile::from_model(*model, sigma, epsilon, y_points);
                  },
                  py::arg("model"), py::arg("sigma"), py::arg("epsilon"),
                  py::arg("y_points") = 64)
      .def_static("from_functions", &RateProfile::from_functions, py::arg("r_minus"),
                  py::arg("r_plus"), py::arg("epsilon"), py::arg("y_points") = 256)
      .def("r_minus", &RateProfile::r_minus)
      .def("r_plus", &RateProfile::r_plus)
      .def("lambda1", &RateProfile::lambda1)
      .def("a", &RateProfile::a)
      .def("avg_r_minus", &RateProfile::avg_r_minus)
      .def("avg_lambda1", &RateProfile::avg_lambda1)
      .def_property_readonly("epsilon", &RateProfile::epsilon);

  py::class_<JumpSolution>(m, "JumpSolution")
      .def_readonly("y", &JumpSolution::y)
      .def_readonly("delta", &JumpSolution::delta)
      .def_readonly("p_minus", &JumpSolution::p_minus)
      .def_readonly("p_plus", &JumpSolution::p_plus)
      .def_readonly("residual_sup", &JumpSolution::residual_sup);
  m.def("delta_periodic", &delta_periodic, py::arg("profile"), py::arg("n_out") = 512);
  m.def("occupation", &occupation, py::arg("profile"), py::arg("p_plus_0"), py::arg("y0"),
        py::arg("y"));
  m.def("mean_jump_time", &mean_jump_time, py::arg("profile"), py::arg("y0") = 0.0);
  m.def("mean_jump_time_from_plus", &mean_jump_time_from_plus, py::arg("profile"),
        py::arg("y0") = 0.0);

  py::class_<HittingStats>(m, "HittingStats")
      .def_readonly("n", &HittingStats::n)
      .def_readonly("mean", &HittingStats::mean)
      .def_readonly("stderr", &HittingStats::stderr_)
      .def_readonly("ci95_low", &HittingStats::ci95_low)
      .def_readonly("ci95_high", &HittingStats::ci95_high)
      .def_readonly("censored", &HittingStats::censored)
      .def_readonly("ks_stat", &HittingStats::ks_stat)
      .def_readonly("flagged", &HittingStats::flagged);
  m.def("simulate_jump", &simulate_jump, py::arg("profile"), py::arg("y0"), py::arg("seed"),
        py::arg("n_samples"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &SimConfig::epsilon)
      .def_readwrite("sigma", &SimConfig::sigma)
      .def_readwrite("rho", &SimConfig::rho)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("rho_hat", &SimConfig::rho_hat)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("n_paths", &SimConfig::n_paths)
      .def_readwrite("max_time", &SimConfig::max_time)
      .def_readwrite("threads", &SimConfig::threads)
      .def_property(
          "start_xy",
          [](const SimConfig& c) { return py::make_tuple(c.start.x, c.start.y); },
          [](SimConfig& c, std::pair<double, double> xy) {
            c.start.on_boundary_a = false;
            c.start.x = xy.first;
            c.start.y = xy.second;
          })
      .def("start_on_boundary_a", [](SimConfig& c, double y0) {
        c.start.on_boundary_a = true;
        c.start.y = y0;
      });
  m.def("first_hit_B",
        [](const SimConfig& config, const ModelPtr& model) {
          const GeometrySweep geo = sweep_geometry(*model);
          const HitResult res = first_hit_B(config, *model, geo);
          return py::make_tuple(res.stats, res.tau);
        },
        py::arg("config"), py::arg("model"));
  m.def("empirical_committor",
        [](const SimConfig& config, const ModelPtr& model, double x, double y,
           std::size_t n) {
          const GeometrySweep geo = sweep_geometry(*model);
          const CommittorEstimate est = empirical_committor(config, *model, geo, x, y, n);
          return py::make_tuple(est.p_hit_a, est.stderr_, est.n);
        },
        py::arg("config"), py::arg("model"), py::arg("x"), py::arg("y"), py::arg("n"));

  m.def("ek_static", [](const ModelPtr& model, double sigma, double y) {
    return ek_static(find_critical_points(*model, y, sigma), sigma);
  }, py::arg("model"), py::arg("sigma"), py::arg("y") = 0.0);
  py::class_<Prediction>(m, "Prediction")
      .def_readonly("value", &Prediction::value)
      .def_readonly("law", &Prediction::law)
      .def_readonly("regime", &Prediction::regime)
      .def_readonly("error_envelope", &Prediction::error_envelope)
      .def_readonly("valid", &Prediction::valid)
      .def_readonly("low_confidence", &Prediction::low_confidence)
      .def_readonly("extra_factor", &Prediction::extra_factor);
  m.def("ek_fast_forcing", &ek_fast_forcing, py::arg("profile"));
  m.def("ek_laplace_peak", &ek_laplace_peak, py::arg("profile"), py::arg("sigma"));
  py::class_<RegimeInfo>(m, "RegimeInfo")
      .def_readonly("label", &RegimeInfo::label)
      .def_readonly("min_lambda1", &RegimeInfo::min_lambda1)
      .def_readonly("max_lambda1", &RegimeInfo::max_lambda1)
      .def_readonly("avg_lambda1", &RegimeInfo::avg_lambda1)
      .def_readonly("slack", &RegimeInfo::slack)
      .def_readonly("low_confidence", &RegimeInfo::low_confidence);
  m.def("classify_regime", &classify_regime, py::arg("profile"), py::arg("epsilon"),
        py::arg("sigma"));

  py::class_<SpectralProfile>(m, "SpectralProfile")
      .def_property_readonly("sigma", [](const SpectralProfile& p) { return p.sigma; })
      .def_property_readonly("y", [](const SpectralProfile& p) { return p.y; })
      .def("lambda1_num", &SpectralProfile::lambda1_num)
      .def("rate_profile", &SpectralProfile::rate_profile, py::arg("epsilon"),
           py::arg("numeric_lambda1") = true);
  m.def("build_spectral_profile",
        [](const ModelPtr& model, double sigma, std::size_t y_points, std::size_t n_max,
           std::size_t eigen_nodes) {
          return build_spectral_profile(model, sigma, y_points, n_max, eigen_nodes);
        },
        py::arg("model"), py::arg("sigma"), py::arg("y_points") = 32, py::arg("n_max") = 6,
        py::arg("eigen_nodes") = 2048);

  py::class_<InvariantExpansion>(m, "InvariantExpansion")
      .def("pi", &InvariantExpansion::pi, py::arg("x"), py::arg("y"))
      .def("delta1", [](const InvariantExpansion& e, double y) { return e.delta1.value(y); })
      .def_readonly("negative_density", &InvariantExpansion::negative_density)
      .def_readonly("normalization", &InvariantExpansion::normalization);
  m.def("assemble_expansion",
        [](const SpectralProfile& p, double epsilon, double rho) {
          return assemble_expansion(p, epsilon, rho);
        },
        py::arg("profile"), py::arg("epsilon"), py::arg("rho"), py::keep_alive<0, 1>());

  py::class_<CapacityEstimate>(m, "CapacityEstimate")
      .def_readonly("c0", &CapacityEstimate::c0)
      .def_readonly("dirichlet_upper", &CapacityEstimate::dirichlet_upper)
      .def_readonly("thomson_lower", &CapacityEstimate::thomson_lower)
      .def_readonly("defect_upper", &CapacityEstimate::defect_upper)
      .def_readonly("defect_lower", &CapacityEstimate::defect_lower);
  m.def("estimate_capacity",
        [](const SpectralProfile& p, const InvariantExpansion& e, double rho_hat) {
          return estimate_capacity(p, e, rho_hat);
        },
        py::arg("profile"), py::arg("expansion"), py::arg("rho_hat") = 0.3);

  m.def("run_cli", &run_cli, py::arg("args"),
        "invoke the command-line interface; returns the exit code");
}
