// Copyright 2026 The Floquet Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "floquet/ensemble.hpp"
#include "floquet/floquet_driver.hpp"
#include "floquet/measurement.hpp"
#include "floquet/observables.hpp"

namespace py = pybind11;
using namespace floquet;

namespace {

py::dict record_dict(const TimeSeriesRecord& r) {
  std::vector<int> index;
  std::vector<double> time;
  std::vector<std::vector<double>> z;
  for (const auto& p : r.points) {
    index.push_back(p.half_period_index);
    time.push_back(p.time_ns);
    z.push_back(p.site_z);
  }
  py::dict d;
  d["half_period_index"] = index;
  d["time_ns"] = time;
  d["magnetization"] = r.magnetization();
  d["staggered_magnetization"] = r.staggered_magnetization();
  d["chi_sg"] = r.chi_sg();
  d["site_z"] = z;
  d["config_hash"] = r.config_hash;
  return d;
}

std::string manifest_hash(const CommandResult& r) { return r.manifest.manifest_hash; }

}  // namespace

PYBIND11_MODULE(_floquet_lab, m) {
  m.doc() = "Exact simulator for a disordered, imperfectly flipped Floquet spin chain.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_MemoryError);

  py::enum_<InteractionKind>(m, "InteractionKind")
      .value("XX", InteractionKind::kXX)
      .value("ISING", InteractionKind::kIsing)
      .value("OFF", InteractionKind::kOff);

  py::class_<FloquetConfig>(m, "FloquetConfig")
      .def(py::init([](int length) { return FloquetConfig::with_defaults(length); }), py::arg("length") = 10)
      .def_readwrite("chain_length", &FloquetConfig::chain_length)
      .def_readwrite("epsilon", &FloquetConfig::epsilon)
      .def_readwrite("t1_flip", &FloquetConfig::t1_flip)
      .def_readwrite("t2_disorder", &FloquetConfig::t2_disorder)
      .def_readwrite("t3_int", &FloquetConfig::t3_int)
      .def_readwrite("j1", &FloquetConfig::j1)
      .def_readwrite("j2", &FloquetConfig::j2)
      .def_readwrite("interaction_kind", &FloquetConfig::interaction_kind)
      .def_readwrite("qutrit_anharmonicity", &FloquetConfig::qutrit_anharmonicity)
      .def("validate", &FloquetConfig::validate)
      .def("period", &FloquetConfig::period)
      .def("canonical_text", [](const FloquetConfig& c) { return canonical_text(c); });

  py::class_<DisorderRealization>(m, "DisorderRealization")
      .def_static("draw", &DisorderRealization::draw, py::arg("length"), py::arg("seed"))
      .def_static("clean", &DisorderRealization::clean, py::arg("length"))
      .def_readonly("phases", &DisorderRealization::phases)
      .def_readonly("seed", &DisorderRealization::seed);

  m.def("derive_seed", &derive_seed, py::arg("master_seed"), py::arg("index"));

  m.def(
      "run_stroboscopic",
      [](const FloquetConfig& c, const DisorderRealization& r, int n, const std::string& bits) {
        const StateVector psi =
            bits.empty() ? StateVector::ground(c.chain_length) : StateVector::from_bitstring(bits);
        return record_dict(run_stroboscopic(c, r, psi, n));
      },
      py::arg("config"), py::arg("realization"), py::arg("n_half_periods"), py::arg("initial_state") = "");

  m.def(
      "period_unitary",
      [](const FloquetConfig& c, const DisorderRealization& r) { return build_period_unitary(c, r).unitary(); },
      py::arg("config"), py::arg("realization"));

  m.def("verify_flip_elimination", &verify_flip_elimination, py::arg("config"), py::arg("realization"));

  m.def("spin_glass_order", &spin_glass_order, py::arg("correlators"));

  m.def(
      "magnitude_spectrum",
      [](const std::vector<double>& series, bool half) {
        const Spectrum s = magnitude_spectrum(series, half);
        return py::make_tuple(s.frequency, s.magnitude);
      },
      py::arg("series"), py::arg("half_period_sampling") = true);

  m.def(
      "extract_lifetime",
      [](const std::vector<double>& series, std::size_t window, double threshold) {
        return extract_lifetime(series, LifetimeOptions{window, threshold});
      },
      py::arg("series"), py::arg("window") = 64, py::arg("threshold") = 0.1);

  py::class_<ReadoutCalibration>(m, "ReadoutCalibration")
      .def(py::init<>())
      .def_static("device_defaults", &ReadoutCalibration::device_defaults, py::arg("sites"))
      .def_static("perfect", &ReadoutCalibration::perfect, py::arg("sites"))
      .def_readwrite("f00", &ReadoutCalibration::f00)
      .def_readwrite("f11", &ReadoutCalibration::f11)
      .def("confusion", &ReadoutCalibration::confusion, py::arg("site"));

  m.def("apply_confusion", &apply_confusion, py::arg("probabilities"), py::arg("calibration"));
  m.def(
      "correct_distribution",
      [](const Eigen::VectorXd& observed, const ReadoutCalibration& cal) {
        const CorrectedMarginals c = correct_distribution(observed, cal);
        return py::make_tuple(c.site_z, c.pair_zz);
      },
      py::arg("observed"), py::arg("calibration"));

  // Command layer: each call writes its outputs under out_dir and returns the manifest hash.
  m.def(
      "cmd_evolve",
      [](const std::string& config_path, const std::string& out) {
        return manifest_hash(cmd_evolve(load_run_config(config_path), out));
      },
      py::arg("config_path"), py::arg("out_dir"));
  m.def(
      "cmd_sweep",
      [](const std::string& config_path, const std::string& out) {
        return manifest_hash(cmd_sweep(load_run_config(config_path), out));
      },
      py::arg("config_path"), py::arg("out_dir"));
  m.def(
      "parse_run_config_text",
      [](const std::string& text) { return canonical_run_text("config", parse_run_config(text, "<string>")); },
      py::arg("text"));
}
