#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "occsim/experiments.hpp"
#include "occsim/fuzzy.hpp"
#include "occsim/model.hpp"
#include "occsim/sight.hpp"
#include "occsim/sim.hpp"
#include "occsim/vomas.hpp"

namespace py = pybind11;
using namespace occ;

namespace {

std::shared_ptr<const Model> model_or_default(const std::string& path) {
    return path.empty() ? default_model() : load_model(path);
}

py::list records_to_py(const std::vector<TickRecord>& rs) {
    py::list out;
    for (const auto& r : rs) {
        py::dict d;
        d["tick"] = r.tick;
        d["ssd"] = r.ssd;
        d["distance"] = r.distance;
        d["fear_display"] = r.fear_display;
        d["fear_level"] = to_string(r.fear_level);
        d["bullet_speed"] = r.bullet_speed;
        d["target_speed"] = r.target_speed;
        out.append(d);
    }
    return out;
}

py::list reports_to_py(const std::vector<InvariantReport>& reps) {
    py::list out;
    for (const auto& r : reps) {
        py::list ev;
        for (const auto& e : r.evidence) ev.append(py::make_tuple(e.index, e.observed));
        py::dict d;
        d["id"] = r.id;
        d["verdict"] = to_string(r.verdict);
        d["evidence"] = ev;
        out.append(d);
    }
    return out;
}

py::list table_to_py(const ComparisonTable& t) {
    py::list out;
    for (const auto& r : t) {
        py::dict d;
        d["speed_mph"] = r.speed_mph;
        d["agent"] = r.agent;
        d["human"] = r.human;
        d["agent_formula"] = r.agent_formula;
        d["human_formula"] = r.human_formula;
        d["success"] = r.success;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(occsim_py, m) {
    m.doc() = "Fear-driven collision avoidance simulator: fuzzy appraisal, sight distances, runs and invariant checks";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("eval_trimf", [](double l, double p, double r, double x) { return eval_trimf({l, p, r}, x); },
          py::arg("left"), py::arg("peak"), py::arg("right"), py::arg("x"));

    m.def("compute_likelihood",
          [](double d, double s, const std::string& model) { return model_or_default(model)->fear.compute_likelihood(d, s); },
          py::arg("distance_norm"), py::arg("speed_norm"), py::arg("model") = "");

    m.def("fear_potential",
          [](double u, double l, double ig, const std::string& model) {
              return model_or_default(model)->fear.fear_potential({u, l, ig});
          },
          py::arg("undesirability"), py::arg("likelihood"), py::arg("ig"), py::arg("model") = "");

    m.def("fear_intensity", &fear_intensity, py::arg("potential"), py::arg("threshold"));

    m.def("classify_level",
          [](double intensity, const std::string& model) {
              auto [level, display] = model_or_default(model)->fear.classify(intensity);
              return py::make_tuple(to_string(level), display);
          },
          py::arg("intensity"), py::arg("model") = "");

    m.def("stopping_sight_distance", [](double V, double t, double a) { return stopping_sight_distance({V, t, a}); },
          py::arg("V"), py::arg("t"), py::arg("a") = 11.2);
    m.def("overtaking_sight_distance",
          [](double Vb, double t, double s, double a) { return overtaking_sight_distance({Vb, t, s, a}); },
          py::arg("Vb"), py::arg("t"), py::arg("s"), py::arg("a"));
    m.def("to_sim_units", [](double feet) { return to_sim_units(feet); }, py::arg("feet"));

    m.def("run_scenario",
          [](const std::string& path, int ticks) {
              auto doc = load_scenario(path);
              if (ticks >= 0) doc.scenario.ticks = ticks;
              Trace t;
              {
                  py::gil_scoped_release nogil;
                  t = run_scenario(doc.world, doc.scenario, *doc.model);
              }
              py::dict d;
              d["records"] = records_to_py(t.records);
              d["collided"] = t.collided;
              d["csv"] = trace_to_csv(t);
              return d;
          },
          py::arg("config"), py::arg("ticks") = -1);

    m.def("check_trace_csv",
          [](const std::string& csv, double gap) {
              return reports_to_py(check_trace_invariants(trace_from_csv(csv), {inv1a(gap), inv1b()}));
          },
          py::arg("csv"), py::arg("very_small_gap") = 3.0);

    m.def("compare_ssd",
          [](std::vector<double> speeds) {
              auto mdl = default_model();
              return table_to_py(compare_ssd(speeds, agent_profile(mdl->sight.agent_reaction),
                                             human_profile(mdl->sight.human_reaction), mdl->sight.ssd_decel));
          },
          py::arg("speeds"));
    m.def("compare_osd",
          [](std::vector<double> speeds) {
              auto mdl = default_model();
              return table_to_py(compare_osd(speeds, agent_profile(mdl->sight.agent_reaction),
                                             human_profile(mdl->sight.human_reaction), mdl->sight));
          },
          py::arg("speeds"));

    m.def("import_simconnector",
          [](const std::string& text) {
              py::list out;
              for (const auto& r : import_simconnector(text))
                  out.append(py::make_tuple(r.undesirability, r.likelihood ? py::object(py::float_(*r.likelihood)) : py::none(), r.ig));
              return out;
          },
          py::arg("text"));
}
