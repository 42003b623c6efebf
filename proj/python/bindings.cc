// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "pixground/analysis.h"
#include "pixground/attention.h"
#include "pixground/error.h"
#include "pixground/masks.h"
#include "pixground/metrics.h"
#include "pixground/perturbation.h"
#include "pixground/pipeline.h"
#include "pixground/rle.h"

namespace py = pybind11;
using namespace pixground;

namespace {

using BoolArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

MaskRLE encode_array(const BoolArray& arr) {
  if (arr.ndim() != 2) throw InvalidArgument("mask must be 2-D");
  const auto r = arr.unchecked<2>();
  Bitmask bits({static_cast<std::uint32_t>(r.shape(0)), static_cast<std::uint32_t>(r.shape(1))});
  for (py::ssize_t y = 0; y < r.shape(0); ++y) {
    for (py::ssize_t x = 0; x < r.shape(1); ++x) {
      if (r(y, x)) bits.set(static_cast<std::uint32_t>(y), static_cast<std::uint32_t>(x));
    }
  }
  return encode_rle(bits);
}

BoolArray decode_array(const MaskRLE& rle) {
  const Bitmask bits = decode_rle(rle);
  BoolArray out({static_cast<py::ssize_t>(bits.height()), static_cast<py::ssize_t>(bits.width())});
  auto w = out.mutable_unchecked<2>();
  for (std::uint32_t y = 0; y < bits.height(); ++y) {
    for (std::uint32_t x = 0; x < bits.width(); ++x) w(y, x) = bits.at(y, x);
  }
  return out;
}

std::vector<Grid> grids_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 3) throw InvalidArgument("expected (tokens, rows, cols)");
  const auto r = a.unchecked<3>();
  std::vector<Grid> grids;
  for (py::ssize_t t = 0; t < r.shape(0); ++t) {
    Grid g(static_cast<std::size_t>(r.shape(1)), static_cast<std::size_t>(r.shape(2)));
    for (py::ssize_t y = 0; y < r.shape(1); ++y) {
      for (py::ssize_t x = 0; x < r.shape(2); ++x) {
        g(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = r(t, y, x);
      }
    }
    grids.push_back(std::move(g));
  }
  return grids;
}

std::string evaluate_paths(const std::filesystem::path& benchmark_path,
                           const std::vector<std::filesystem::path>& run_paths,
                           const std::string& strategy, std::size_t jobs,
                           const std::optional<std::filesystem::path>& transcript) {
  const Benchmark benchmark = load_benchmark(benchmark_path);
  std::vector<RunManifest> runs;
  for (const auto& p : run_paths) runs.push_back(load_run_manifest(p));
  EvaluateOptions o;
  o.strategy = parse_strategy(strategy);
  o.jobs = jobs;
  std::optional<TranscriptJudgeProvider> judge;
  if (transcript) {
    judge.emplace(TranscriptMode::Replay, *transcript, nullptr);
    o.judge = &*judge;
  }
  EvaluationReport rep;
  {
    py::gil_scoped_release release;
    rep = evaluate(benchmark, runs, o);
  }
  return report_to_json(rep).dump();
}

}  // namespace

PYBIND11_MODULE(_pixground, m) {
  m.doc() = "Native core of pixground.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", base);
  py::register_exception<SchemaError>(m, "SchemaError", base);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::class_<MaskRLE>(m, "MaskRLE")
      .def(py::init([](std::uint32_t h, std::uint32_t w, std::vector<std::uint32_t> counts) {
             MaskRLE r{{h, w}, std::move(counts)};
             validate_rle(r);
             return r;
           }),
           py::arg("height"), py::arg("width"), py::arg("counts"))
      .def_property_readonly("height", [](const MaskRLE& r) { return r.size.height; })
      .def_property_readonly("width", [](const MaskRLE& r) { return r.size.width; })
      .def_readonly("counts", &MaskRLE::counts)
      .def_property_readonly("area", &foreground_area)
      .def("to_json", [](const MaskRLE& r) { return nlohmann::json(r).dump(); })
      .def_static("from_json",
                  [](const std::string& s) { return nlohmann::json::parse(s).get<MaskRLE>(); })
      .def(py::self == py::self)
      .def("__repr__", [](const MaskRLE& r) {
        return "MaskRLE(" + std::to_string(r.size.height) + "x" + std::to_string(r.size.width) +
               ", runs=" + std::to_string(r.counts.size()) + ")";
      });

  m.def("encode", &encode_array, py::arg("mask"), "2-D boolean array to RLE.");
  m.def("decode", &decode_array, py::arg("rle"), "RLE to a 2-D boolean array.");
  m.def("iou", py::overload_cast<const MaskRLE&, const MaskRLE&>(&iou));

  m.def("harmonic_score", &harmonic_score, py::arg("a"), py::arg("a_dagger"), py::arg("m"),
        py::arg("m_dagger"));
  m.def("parse_option_letter",
        [](std::string_view response, const std::vector<std::string>& choices) {
          return parse_option_letter(response, choices);
        },
        py::arg("response"), py::arg("choices"));

  m.def("normalize_across_outputs",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
          const auto grids = grids_from(a);
          const auto norm = normalize_across_outputs(grids);
          py::array_t<double> out(a.request().shape);
          auto w = out.mutable_unchecked<3>();
          for (std::size_t t = 0; t < norm.grids.size(); ++t) {
            const Grid& g = norm.grids[t];
            for (std::size_t y = 0; y < g.rows(); ++y) {
              for (std::size_t x = 0; x < g.cols(); ++x) {
                w(static_cast<py::ssize_t>(t), static_cast<py::ssize_t>(y),
                  static_cast<py::ssize_t>(x)) = g(y, x);
              }
            }
          }
          return out;
        },
        py::arg("grids"));

  m.def("spelling_perturb",
        [](std::string_view question, const std::vector<std::string>& choices,
           std::string_view instruction, std::uint64_t seed, std::size_t n_sites) {
          const auto r = spelling_perturb(question, choices, instruction, seed, n_sites);
          py::dict d;
          d["question"] = r.question;
          d["choices"] = r.choices;
          d["instruction"] = r.instruction;
          d["prompt"] = r.prompt();
          d["applied"] = r.joint.applied() + r.instruction_edits.applied();
          d["shortfall"] = r.joint.shortfall() + r.instruction_edits.shortfall();
          return d;
        },
        py::arg("question"), py::arg("choices"), py::arg("instruction"), py::arg("seed"),
        py::arg("n_sites") = 8);

  m.def("phrase_location_pct",
        [](std::string_view text, std::size_t char_start) {
          PhraseSpan s;
          s.char_start = char_start;
          return phrase_location_pct(text, s);
        },
        py::arg("text"), py::arg("char_start"));
  m.def("categorize", [](std::string_view phrase) {
    KeywordCategorizer k;
    return to_string(k.categorize(phrase));
  });

  m.def("evaluate_json", &evaluate_paths, py::arg("benchmark"), py::arg("runs"),
        py::arg("strategy") = "oracle", py::arg("jobs") = 1, py::arg("transcript") = py::none());
}
