#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adsm/corpus.hpp"
#include "adsm/error.hpp"
#include "adsm/evaluator.hpp"
#include "adsm/metrics.hpp"
#include "adsm/query.hpp"
#include "adsm/report.hpp"

namespace py = pybind11;

namespace {

class Engine {
 public:
  explicit Engine(adsm::Corpus corpus)
      : corpus_(std::move(corpus)), graph_(adsm::build_citation_graph(corpus_)) {}

  std::size_t size() const { return corpus_.size(); }
  int latest_year() const { return corpus_.latest_year(); }
  std::size_t rejected() const { return corpus_.report().rejected(); }

  py::dict search(const std::string& query, std::size_t start, std::size_t rows) const {
    auto rs = adsm::evaluate(adsm::parse(query), corpus_, graph_);
    std::vector<std::string> page;
    for (std::size_t i = start; i < rs.ids.size() && i < start + rows; ++i) page.push_back(rs.ids[i]);
    py::dict facets;
    for (const auto& [field, counts] : rs.facets) facets[py::str(field)] = counts;
    py::dict out;
    out["total"] = rs.total;
    out["ids"] = page;
    out["facets"] = facets;
    return out;
  }

  std::string metrics(const std::optional<std::string>& query,
                      const std::optional<std::vector<std::string>>& ids, std::size_t cap,
                      std::optional<int> current_year, const std::string& format) const {
    if (query.has_value() == ids.has_value()) {
      throw py::value_error("give exactly one of query or ids");
    }
    auto fmt = adsm::parse_format(format);
    adsm::Selection selection;
    if (query) {
      selection = adsm::select_for_metrics(adsm::evaluate(adsm::parse(*query), corpus_, graph_), cap);
    } else {
      corpus_.resolve(*ids);
      selection = adsm::select_for_metrics(*ids, cap);
    }
    auto report = adsm::metrics_report(selection, corpus_, graph_,
                                       current_year.value_or(corpus_.latest_year()));
    return adsm::render(report, fmt).payload;
  }

  double tori(const std::vector<std::string>& ids) const {
    auto docs = corpus_.resolve(ids);
    return adsm::tori(docs, corpus_, graph_);
  }

  double read10(const std::vector<std::string>& ids, int current_year) const {
    return adsm::read10(corpus_.resolve(ids), corpus_, current_year);
  }

  std::size_t h_index(const std::vector<std::string>& ids) const {
    return adsm::h_index(corpus_.resolve(ids), graph_);
  }

 private:
  adsm::Corpus corpus_;
  adsm::CitationGraph graph_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bibliographic query language and citation metrics";

  static py::exception<adsm::Error> error(m, "AdsmError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const adsm::Error& e) {
      py::object exc = py::handle(error)(e.what());
      exc.attr("kind") = std::string(adsm::to_string(e.kind()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("parse", [](const std::string& q) { return adsm::print_canonical(adsm::parse(q)); },
        "Parse a query and return its canonical form.");
  m.def("explain", [](const std::string& q) { return adsm::explain(adsm::parse(q)); });
  m.def("grammar_help", [] { return std::string(adsm::grammar_help()); });
  m.attr("DEFAULT_CAP") = adsm::kDefaultSelectionCap;

  py::class_<Engine>(m, "Engine")
      .def_static("from_file",
                  [](const std::string& path) { return Engine(adsm::Corpus::ingest_file(path)); })
      .def_static("from_lines",
                  [](const std::vector<std::string>& lines) {
                    return Engine(adsm::Corpus::ingest(std::span<const std::string>(lines)));
                  })
      .def_property_readonly("size", &Engine::size)
      .def_property_readonly("latest_year", &Engine::latest_year)
      .def_property_readonly("rejected", &Engine::rejected)
      .def("search", &Engine::search, py::arg("query"), py::arg("start") = 0, py::arg("rows") = 10)
      .def("metrics", &Engine::metrics, py::arg("query") = py::none(), py::arg("ids") = py::none(),
           py::arg("cap") = adsm::kDefaultSelectionCap, py::arg("current_year") = py::none(),
           py::arg("format") = "json")
      .def("tori", &Engine::tori, py::arg("ids"))
      .def("read10", &Engine::read10, py::arg("ids"), py::arg("current_year"))
      .def("h_index", &Engine::h_index, py::arg("ids"));
}
