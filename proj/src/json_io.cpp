#include "stq/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace stq {

namespace {

json complex_to_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

cxd complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex scalar must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

// Nested complex array over leg dims, outermost leg first.
json coeffs_to_json(const CVec& coeffs, const std::vector<TwoTimeLeg>& legs,
                    std::size_t leg, Index offset, Index stride) {
  if (leg == legs.size()) return complex_to_json(coeffs[offset]);
  json arr = json::array();
  Index inner = stride / legs[leg].dim;
  for (Index i = 0; i < legs[leg].dim; ++i)
    arr.push_back(coeffs_to_json(coeffs, legs, leg + 1, offset + i * inner, inner));
  return arr;
}

void coeffs_from_json(const json& j, const std::vector<TwoTimeLeg>& legs,
                      std::size_t leg, Index offset, Index stride, CVec& out) {
  if (leg == legs.size()) {
    out[offset] = complex_from_json(j);
    return;
  }
  if (!j.is_array() || static_cast<Index>(j.size()) != legs[leg].dim)
    throw std::invalid_argument("coefficient nesting does not match leg dims");
  Index inner = stride / legs[leg].dim;
  for (Index i = 0; i < legs[leg].dim; ++i)
    coeffs_from_json(j[i], legs, leg + 1, offset + i * inner, inner, out);
}

}  // namespace

json to_json(const CMat& m) {
  json data = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(complex_to_json(m(r, c)));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMat matrix_from_json(const json& j) {
  Index rows = j.at("rows").get<Index>();
  Index cols = j.at("cols").get<Index>();
  const json& data = j.at("data");
  if (rows <= 0 || cols <= 0 || static_cast<Index>(data.size()) != rows * cols)
    throw std::invalid_argument("matrix data length does not match rows*cols");
  CMat m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[r * cols + c]);
  return m;
}

json to_json(const Channel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus) kraus.push_back(to_json(k));
  json flags = json::array();
  if (validate(ch, ValidateMode::Cptp).ok) flags.push_back("cptp");
  return json{{"dim_in", ch.dim_in},
              {"dim_out", ch.dim_out},
              {"kraus", std::move(kraus)},
              {"flags", std::move(flags)}};
}

Channel channel_from_json(const json& j) {
  std::vector<CMat> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
  Channel ch(j.at("dim_in").get<Index>(), j.at("dim_out").get<Index>(), std::move(kraus));
  if (j.contains("flags"))
    for (const auto& f : j.at("flags")) {
      std::string flag = f.get<std::string>();
      if (flag == "cptp" && !validate(ch, ValidateMode::Cptp).ok)
        throw std::invalid_argument("channel flagged cptp violates the completeness relation");
      if (flag == "cp" && !validate(ch, ValidateMode::Cp).ok)
        throw std::invalid_argument("channel flagged cp is trace increasing");
    }
  return ch;
}

json to_json(const Instrument& inst) {
  json outcomes = json::array();
  for (const auto& ch : inst.outcomes) outcomes.push_back(to_json(ch));
  return json{{"outcomes", std::move(outcomes)}};
}

Instrument instrument_from_json(const json& j) {
  Instrument inst;
  for (const auto& ch : j.at("outcomes")) inst.outcomes.push_back(channel_from_json(ch));
  if (inst.outcomes.empty()) throw std::invalid_argument("instrument has no outcomes");
  if (!validate(inst).ok)
    throw std::invalid_argument("instrument outcomes do not sum to a CPTP map");
  return inst;
}

json to_json(const Pdm& r) {
  json slots = json::array();
  for (const auto& s : r.space.slots)
    slots.push_back(json{{"label", s.label}, {"dim", s.dim}});
  return json{{"slots", std::move(slots)},
              {"matrix", to_json(r.matrix)},
              {"normalized", r.normalized}};
}

Pdm pdm_from_json(const json& j) {
  std::vector<Slot> slots;
  for (const auto& s : j.at("slots"))
    slots.push_back({s.at("label").get<std::string>(), s.at("dim").get<Index>()});
  Pdm r{matrix_from_json(j.at("matrix")), SlotSpace(std::move(slots)),
        j.value("normalized", true)};
  if (r.matrix.rows() != r.space.total_dim() || r.matrix.rows() != r.matrix.cols())
    throw std::invalid_argument("PDM matrix does not match slot dims");
  return r;
}

json to_json(const PureTwoTimeState& s) {
  json legs = json::array();
  for (const auto& leg : s.legs)
    legs.push_back(json{{"role", leg.role == LegRole::In ? "in" : "out"},
                        {"dim", leg.dim}});
  Index total = s.coeffs.size();
  return json{{"legs", std::move(legs)},
              {"coeffs", coeffs_to_json(s.coeffs, s.legs, 0, 0, total)}};
}

PureTwoTimeState state_from_json(const json& j) {
  std::vector<TwoTimeLeg> legs;
  const json& jl = j.at("legs");
  if (jl.size() != 2 && jl.size() != 4)
    throw std::invalid_argument("two-time states carry 2 (one party) or 4 (two party) legs");
  for (std::size_t i = 0; i < jl.size(); ++i) {
    std::string role = jl[i].at("role").get<std::string>();
    if (role != "in" && role != "out")
      throw std::invalid_argument("leg role must be 'in' or 'out'");
    // legs come in consecutive per-party pairs
    legs.push_back({role == "in" ? LegRole::In : LegRole::Out,
                    jl[i].at("dim").get<Index>(), static_cast<int>(i / 2)});
  }
  Index total = 1;
  for (const auto& leg : legs) total *= leg.dim;
  CVec coeffs(total);
  coeffs_from_json(j.at("coeffs"), legs, 0, 0, total, coeffs);
  return PureTwoTimeState(std::move(legs), std::move(coeffs));
}

json to_json(const TwoTimeEnsemble& e) {
  json members = json::array();
  for (const auto& m : e.members)
    members.push_back(json{{"weight", m.weight}, {"state", to_json(m.state)}});
  return json{{"members", std::move(members)}};
}

TwoTimeEnsemble ensemble_from_json(const json& j) {
  TwoTimeEnsemble e;
  double total = 0.0;
  for (const auto& m : j.at("members")) {
    double w = m.at("weight").get<double>();
    if (w < 0.0 || w > 1.0) throw std::invalid_argument("member weight must lie in [0,1]");
    total += w;
    e.members.push_back({w, state_from_json(m.at("state"))});
  }
  if (e.members.empty()) throw std::invalid_argument("ensemble has no members");
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("ensemble weights must sum to 1");
  return e;
}

json to_json(const ProcessMatrix& w) {
  return json{{"dims",
               json{{"A1", w.dim_a1}, {"A2", w.dim_a2}, {"B1", w.dim_b1}, {"B2", w.dim_b2}}},
              {"matrix", to_json(w.matrix)}};
}

ProcessMatrix process_from_json(const json& j) {
  const json& d = j.at("dims");
  return ProcessMatrix(matrix_from_json(j.at("matrix")), d.at("A1").get<Index>(),
                       d.at("A2").get<Index>(), d.at("B1").get<Index>(),
                       d.at("B2").get<Index>());
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace stq
