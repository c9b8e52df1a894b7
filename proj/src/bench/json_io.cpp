#include "ara/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ara {

namespace {

class Field {
 public:
  Field(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError((path_.empty() ? std::string("document") : path_) + ": " + what);
  }

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Field at(const char* key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) fail(std::string("missing field '") + key + "'");
    return Field(*it, path_.empty() ? key : path_ + "." + key);
  }

  Field at(std::size_t i) const { return Field(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  std::int64_t integer() const {
    if (j_.is_number_integer()) return j_.get<std::int64_t>();
    if (j_.is_number_float()) {
      const double v = j_.get<double>();
      if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
    }
    fail("expected an integer");
  }

  std::size_t index() const {
    const std::int64_t v = integer();
    if (v < 0) fail("expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  std::string text() const {
    if (j_.is_string()) return j_.get<std::string>();
    if (j_.is_number_integer()) return std::to_string(j_.get<std::int64_t>());
    fail("expected a string");
  }

 private:
  const Json& j_;
  std::string path_;
};

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Cell parse_cell(const Field& f) {
  if (f.size() != 2) f.fail("expected a [row, col] pair");
  const std::size_t r = f.at(std::size_t{0}).index();
  const std::size_t c = f.at(std::size_t{1}).index();
  if (r > std::numeric_limits<std::uint32_t>::max() || c > std::numeric_limits<std::uint32_t>::max())
    f.fail("cell index too large");
  return {static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)};
}

Json metadata_json(const std::map<std::string, std::string>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::map<std::string, std::string> metadata_from(const Field& f) {
  std::map<std::string, std::string> out;
  if (!f.json().is_object()) f.fail("expected an object");
  for (auto it = f.json().begin(); it != f.json().end(); ++it)
    out[it.key()] = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
  return out;
}

}  // namespace

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  out << text;
  if (!out) throw Error(path + ": write failed");
}

const char* to_string(Domain d) {
  switch (d) {
    case Domain::ara: return "ara";
    case Domain::fams: return "fams";
    case Domain::tsg: return "tsg";
  }
  return "?";
}

Domain detect_domain(const Json& j) {
  if (!j.is_object()) throw ParseError("document: expected an object");
  if (j.contains("marshals")) return Domain::fams;
  if (j.contains("teams") || j.contains("categories")) return Domain::tsg;
  if (j.contains("k")) return Domain::ara;
  throw ParseError("document: cannot tell the instance kind (expected 'k', 'marshals' or 'teams')");
}

AraGame game_from_json(const Json& j) {
  const Field root(j, "");
  const std::size_t k = root.at("k").index();
  const std::size_t n = root.at("n").index();

  std::vector<AssignmentConstraint> cons;
  const Field cf = root.at("constraints");
  for (std::size_t s = 0; s < cf.size(); ++s) {
    const Field c = cf.at(s);
    AssignmentConstraint con;
    const Field cells = c.at("cells");
    for (std::size_t q = 0; q < cells.size(); ++q) con.cells.push_back(parse_cell(cells.at(q)));
    con.lower = c.has("lower") ? c.at("lower").integer() : 0;
    con.upper = c.at("upper").integer();
    cons.push_back(std::move(con));
  }

  std::vector<Target> targets;
  const Field tf = root.at("targets");
  for (std::size_t t = 0; t < tf.size(); ++t) {
    const Field f = tf.at(t);
    Target tg;
    tg.id = f.at("id").text();
    const Field cells = f.at("cells");
    std::vector<double> weights(cells.size(), 1.0);
    if (f.has("weights")) {
      const Field w = f.at("weights");
      if (w.size() != cells.size()) w.fail("expected one weight per cell");
      for (std::size_t q = 0; q < w.size(); ++q) weights[q] = w.at(q).number();
    }
    for (std::size_t q = 0; q < cells.size(); ++q) tg.cells.push_back({parse_cell(cells.at(q)), weights[q]});
    tg.u_def = f.at("u_def").number();
    tg.u_undef = f.at("u_undef").number();
    targets.push_back(std::move(tg));
  }

  std::vector<AdversaryType> types;
  if (root.has("adversary_types")) {
    const Field af = root.at("adversary_types");
    for (std::size_t a = 0; a < af.size(); ++a) {
      const Field f = af.at(a);
      AdversaryType ty;
      ty.id = f.at("id").text();
      ty.probability = f.at("p").number();
      const Field ts = f.at("targets");
      for (std::size_t q = 0; q < ts.size(); ++q) ty.targets.push_back(ts.at(q).text());
      types.push_back(std::move(ty));
    }
  }
  return AraGame(k, n, std::move(cons), std::move(targets), std::move(types));
}

Json game_to_json(const AraGame& game) {
  Json j;
  j["k"] = game.k();
  j["n"] = game.n();
  Json cons = Json::array();
  for (const auto& c : game.constraints()) {
    Json cells = Json::array();
    for (Cell cell : c.cells) cells.push_back({cell.row, cell.col});
    cons.push_back({{"cells", cells}, {"lower", c.lower}, {"upper", c.upper}});
  }
  j["constraints"] = cons;
  Json targets = Json::array();
  for (const auto& t : game.targets()) {
    Json cells = Json::array(), weights = Json::array();
    for (const auto& wc : t.cells) {
      cells.push_back({wc.cell.row, wc.cell.col});
      weights.push_back(wc.weight);
    }
    targets.push_back({{"id", t.id}, {"cells", cells}, {"weights", weights}, {"u_def", t.u_def}, {"u_undef", t.u_undef}});
  }
  j["targets"] = targets;
  Json types = Json::array();
  for (const auto& ty : game.adversary_types())
    types.push_back({{"id", ty.id}, {"p", ty.probability}, {"targets", ty.targets}});
  j["adversary_types"] = types;
  return j;
}

FamsInstance fams_from_json(const Json& j) {
  const Field root(j, "");
  FamsInstance inst;
  inst.marshals = root.at("marshals").index();
  const Field sf = root.at("schedules");
  for (std::size_t s = 0; s < sf.size(); ++s) {
    const Field f = sf.at(s);
    FamsSchedule sched;
    sched.id = f.has("id") ? f.at("id").text() : "s" + std::to_string(s);
    const Field fl = f.at("flights");
    for (std::size_t q = 0; q < fl.size(); ++q) sched.flights.push_back(fl.at(q).text());
    inst.schedules.push_back(std::move(sched));
  }
  const Field ff = root.at("flights");
  for (std::size_t q = 0; q < ff.size(); ++q) {
    const Field f = ff.at(q);
    inst.flights.push_back({f.at("id").text(), f.at("u_def").number(), f.at("u_undef").number()});
  }
  if (root.has("forbidden")) {
    const Field bf = root.at("forbidden");
    for (std::size_t q = 0; q < bf.size(); ++q) {
      const Field p = bf.at(q);
      if (p.size() != 2) p.fail("expected a [marshal, schedule] pair");
      inst.forbidden.emplace_back(p.at(std::size_t{0}).index(), p.at(std::size_t{1}).index());
    }
  }
  if (root.has("metadata")) inst.metadata = metadata_from(root.at("metadata"));
  return inst;
}

Json fams_to_json(const FamsInstance& inst) {
  Json j;
  j["marshals"] = inst.marshals;
  Json schedules = Json::array();
  for (const auto& s : inst.schedules) schedules.push_back({{"id", s.id}, {"flights", s.flights}});
  j["schedules"] = schedules;
  Json flights = Json::array();
  for (const auto& f : inst.flights) flights.push_back({{"id", f.id}, {"u_def", f.u_def}, {"u_undef", f.u_undef}});
  j["flights"] = flights;
  Json forbidden = Json::array();
  for (auto [m, s] : inst.forbidden) forbidden.push_back({m, s});
  j["forbidden"] = forbidden;
  if (!inst.metadata.empty()) j["metadata"] = metadata_json(inst.metadata);
  return j;
}

TsgInstance tsg_from_json(const Json& j) {
  const Field root(j, "");
  TsgInstance inst;
  const Field rf = root.at("resources");
  for (std::size_t q = 0; q < rf.size(); ++q) {
    const Field f = rf.at(q);
    inst.resources.push_back({f.at("id").text(), f.at("capacity").integer()});
  }
  const Field tf = root.at("teams");
  for (std::size_t q = 0; q < tf.size(); ++q) {
    const Field f = tf.at(q);
    TsgTeam team;
    team.id = f.at("id").text();
    const Field m = f.at("members");
    for (std::size_t r = 0; r < m.size(); ++r) team.members.push_back(m.at(r).text());
    team.effectiveness = f.at("eff").number();
    inst.teams.push_back(std::move(team));
  }
  const Field cf = root.at("categories");
  for (std::size_t q = 0; q < cf.size(); ++q) {
    const Field f = cf.at(q);
    TsgCategory c;
    c.id = f.at("id").text();
    c.risk = f.at("risk").text();
    c.flight = f.at("flight").text();
    c.passengers = f.at("n").integer();
    c.u_def = f.at("u_def").number();
    c.u_undef = f.at("u_undef").number();
    inst.categories.push_back(std::move(c));
  }
  const Field pf = root.at("risks");
  for (std::size_t q = 0; q < pf.size(); ++q) {
    const Field f = pf.at(q);
    inst.risks.push_back({f.at("id").text(), f.at("p").number()});
  }
  if (root.has("metadata")) inst.metadata = metadata_from(root.at("metadata"));
  return inst;
}

Json tsg_to_json(const TsgInstance& inst) {
  Json j;
  Json resources = Json::array();
  for (const auto& r : inst.resources) resources.push_back({{"id", r.id}, {"capacity", r.capacity}});
  j["resources"] = resources;
  Json teams = Json::array();
  for (const auto& t : inst.teams) teams.push_back({{"id", t.id}, {"members", t.members}, {"eff", t.effectiveness}});
  j["teams"] = teams;
  Json cats = Json::array();
  for (const auto& c : inst.categories)
    cats.push_back({{"id", c.id}, {"risk", c.risk}, {"flight", c.flight}, {"n", c.passengers},
                    {"u_def", c.u_def}, {"u_undef", c.u_undef}});
  j["categories"] = cats;
  Json risks = Json::array();
  for (const auto& r : inst.risks) risks.push_back({{"id", r.id}, {"p", r.probability}});
  j["risks"] = risks;
  if (!inst.metadata.empty()) j["metadata"] = metadata_json(inst.metadata);
  return j;
}

}  // namespace ara
