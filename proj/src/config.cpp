#include "codesign/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "codesign/errors.hpp"

namespace codesign {

using nlohmann::json;

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Bimads ? "bimads" : "lhs";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "bimads") return Algorithm::Bimads;
  if (name == "lhs") return Algorithm::Lhs;
  throw ConfigError("unknown algorithm '" + name + "' (expected bimads or lhs)");
}

namespace {

std::string layout_name(InitialConditionLayout layout) {
  return layout == InitialConditionLayout::Columns ? "columns" : "rows";
}

/// Typed access to one JSON object; every error names the dotted field path.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : node_.items()) {
      if (!allowed.count(item.key())) throw ConfigError(field(item.key()) + ": unknown key");
    }
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  Section child(const std::string& key) const { return Section(node_.at(key), field(key)); }

  template <typename T>
  void read(const std::string& key, T& out) const {
    if (!has(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(field(key) + ": " + type_message(node_.at(key)));
    }
  }

  const json& at(const std::string& key) const { return node_.at(key); }
  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }
  static std::string type_message(const json& value) {
    return std::string("value of the wrong type (") + value.type_name() + ")";
  }

  const json& node_;
  std::string path_;
};

template <typename T>
void read_integer(const Section& s, const std::string& key, T& out) {
  if (!s.has(key)) return;
  const json& v = s.at(key);
  if (!v.is_number_integer()) throw ConfigError(s.field(key) + ": expected an integer");
  out = v.get<T>();
}

void read_design_space(const Section& s, DesignSpace& space) {
  for (const auto& item : s.at("design_space").items()) {
    auto it = std::find_if(space.dimensions.begin(), space.dimensions.end(),
                           [&](const Dimension& d) { return d.name == item.key(); });
    const std::string path = "design_space." + item.key();
    if (it == space.dimensions.end()) throw ConfigError(path + ": unknown design variable");
    const json& bounds = item.value();
    if (!bounds.is_array() || bounds.size() != 2 || !bounds[0].is_number() ||
        !bounds[1].is_number()) {
      throw ConfigError(path + ": expected [lower, upper]");
    }
    it->lower = bounds[0].get<double>();
    it->upper = bounds[1].get<double>();
  }
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (budget < 10) throw ConfigError("budget: must be at least 10");
  if (seeds.empty()) throw ConfigError("seeds: at least one seed is required");
  if (algorithms.empty()) throw ConfigError("algorithms: at least one algorithm is required");
  try {
    space.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("design_space: ") + e.what());
  }
  for (const Dimension& d : space.dimensions) {
    if (!(d.lower < d.upper)) {
      throw ConfigError("design_space." + d.name + ": bounds must satisfy min < max");
    }
  }
  if (space.dimensions[0].lower <= 0.0) throw ConfigError("design_space.Ts: must be positive");
  if (space.dimensions[1].lower < 1) throw ConfigError("design_space.N: must be at least 1");
  if (space.dimensions[2].lower < 1) throw ConfigError("design_space.N_FGM: must be at least 1");
  if (space.dimensions[3].lower <= 0.0) {
    throw ConfigError("design_space.q_speed: must be positive");
  }
  if (case_study == CaseStudy::Fpga && space.dimensions[4].lower < 1) {
    throw ConfigError("design_space.N_frac: must be at least 1");
  }
  try {
    simulation.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("simulation: ") + e.what());
  }
  if (initial_condition_count < 0) {
    throw ConfigError("simulation.initial_conditions.count: must be nonnegative");
  }
  if (!(u_min < u_max)) throw ConfigError("plant.u_min: must be below plant.u_max");
  if (!(state_bound > 0.0)) throw ConfigError("models.fpga.state_bound: must be positive");
  if (cpu_timing.reference_decision_size < 1 || cpu_timing.reference_iterations < 1 ||
      !(cpu_timing.reference_seconds > 0.0) || cpu_timing.linear_coefficient < 0.0) {
    throw ConfigError("models.cpu: calibration values must be positive");
  }
  fpga.validate();
  if (!(bootstrap_fraction > 0.0 && bootstrap_fraction <= 1.0)) {
    throw ConfigError("search.bootstrap_fraction: must lie in (0, 1]");
  }
  if (sub_budget < 1) throw ConfigError("search.sub_budget: must be at least 1");
  if (!(initial_mesh_fraction > 0.0 && initial_mesh_fraction <= 1.0)) {
    throw ConfigError("search.initial_mesh_fraction: must lie in (0, 1]");
  }
  if (!(min_mesh_ratio > 0.0)) throw ConfigError("search.min_mesh_ratio: must be positive");
  if (extreme_period < 0) throw ConfigError("search.extreme_period: must be nonnegative");
  try {
    build_mass_spring_chain(plant);
  } catch (const Error& e) {
    throw ConfigError(std::string("plant: ") + e.what());
  }
}

ExperimentConfig default_experiment_config(CaseStudy study) {
  ExperimentConfig config;
  config.case_study = study;
  config.space = default_design_space(study);
  config.simulation.epsilon = study == CaseStudy::Cpu ? 0.01 : 0.02;
  return config;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              std::optional<CaseStudy> expected) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(line_of(text, e.byte)) +
                      ": malformed JSON");
  }
  const Section s(root, "");
  s.allow({"case_study", "budget", "seeds", "algorithms", "design_space", "simulation", "plant",
           "models", "search", "output_dir"});

  CaseStudy study = expected.value_or(CaseStudy::Cpu);
  if (s.has("case_study")) {
    std::string name;
    s.read("case_study", name);
    study = case_study_from_string(name);
    if (expected && *expected != study) {
      throw ConfigError("case_study: config is for the " + name + " study, expected " +
                        to_string(*expected));
    }
  }
  ExperimentConfig c = default_experiment_config(study);

  read_integer(s, "budget", c.budget);
  if (s.has("seeds")) {
    const json& seeds = s.at("seeds");
    if (!seeds.is_array()) throw ConfigError("seeds: expected an array of integers");
    c.seeds.clear();
    for (const json& v : seeds) {
      if (!v.is_number_unsigned()) throw ConfigError("seeds: expected nonnegative integers");
      c.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  if (s.has("algorithms")) {
    std::vector<std::string> names;
    s.read("algorithms", names);
    c.algorithms.clear();
    for (const auto& name : names) c.algorithms.push_back(algorithm_from_string(name));
  }
  if (s.has("design_space")) {
    s.child("design_space");  // type check
    read_design_space(s, c.space);
  }
  if (s.has("simulation")) {
    const Section sim = s.child("simulation");
    sim.allow({"t_max", "epsilon", "substep", "divergence_threshold", "initial_conditions"});
    sim.read("t_max", c.simulation.t_max);
    sim.read("epsilon", c.simulation.epsilon);
    sim.read("substep", c.simulation.substep);
    sim.read("divergence_threshold", c.simulation.divergence_threshold);
    if (sim.has("initial_conditions")) {
      const Section ic = sim.child("initial_conditions");
      ic.allow({"layout", "count"});
      std::string layout = layout_name(c.initial_condition_layout);
      ic.read("layout", layout);
      if (layout == "columns") {
        c.initial_condition_layout = InitialConditionLayout::Columns;
      } else if (layout == "rows") {
        c.initial_condition_layout = InitialConditionLayout::Rows;
      } else {
        throw ConfigError(ic.field("layout") + ": expected columns or rows");
      }
      read_integer(ic, "count", c.initial_condition_count);
    }
  }
  if (s.has("plant")) {
    const Section p = s.child("plant");
    p.allow({"masses", "spring_constants", "damping_constants", "u_min", "u_max"});
    p.read("masses", c.plant.masses);
    p.read("spring_constants", c.plant.spring_constants);
    p.read("damping_constants", c.plant.damping_constants);
    p.read("u_min", c.u_min);
    p.read("u_max", c.u_max);
  }
  if (s.has("models")) {
    const Section m = s.child("models");
    m.allow({"cpu", "fpga"});
    if (m.has("cpu")) {
      const Section cpu = m.child("cpu");
      cpu.allow({"reference_decision_size", "reference_iterations", "reference_seconds",
                 "linear_coefficient", "wallclock"});
      read_integer(cpu, "reference_decision_size", c.cpu_timing.reference_decision_size);
      read_integer(cpu, "reference_iterations", c.cpu_timing.reference_iterations);
      cpu.read("reference_seconds", c.cpu_timing.reference_seconds);
      cpu.read("linear_coefficient", c.cpu_timing.linear_coefficient);
      cpu.read("wallclock", c.wallclock_timing);
    }
    if (m.has("fpga")) {
      const Section f = m.child("fpga");
      f.allow({"lut_capacity", "ff_capacity", "dsp_capacity", "bram_blocks", "bram_block_bits",
               "parallel_macs", "lut_base", "lut_per_bit_unit", "lut_per_address_bit",
               "ff_base", "ff_per_bit_unit", "ff_per_address_bit", "pipeline_depth", "clock_hz",
               "resource_constraint", "state_bound"});
      ResourceModelParams& r = c.fpga;
      f.read("lut_capacity", r.lut_capacity);
      f.read("ff_capacity", r.ff_capacity);
      f.read("dsp_capacity", r.dsp_capacity);
      f.read("bram_blocks", r.bram_blocks);
      f.read("bram_block_bits", r.bram_block_bits);
      read_integer(f, "parallel_macs", r.parallel_macs);
      f.read("lut_base", r.lut_base);
      f.read("lut_per_bit_unit", r.lut_per_bit_unit);
      f.read("lut_per_address_bit", r.lut_per_address_bit);
      f.read("ff_base", r.ff_base);
      f.read("ff_per_bit_unit", r.ff_per_bit_unit);
      f.read("ff_per_address_bit", r.ff_per_address_bit);
      read_integer(f, "pipeline_depth", r.pipeline_depth);
      f.read("clock_hz", r.clock_hz);
      f.read("resource_constraint", c.resource_constraint);
      f.read("state_bound", c.state_bound);
    }
  }
  if (s.has("search")) {
    const Section k = s.child("search");
    k.allow({"bootstrap_fraction", "sub_budget", "initial_mesh_fraction", "min_mesh_ratio",
             "extreme_period"});
    k.read("bootstrap_fraction", c.bootstrap_fraction);
    read_integer(k, "sub_budget", c.sub_budget);
    k.read("initial_mesh_fraction", c.initial_mesh_fraction);
    k.read("min_mesh_ratio", c.min_mesh_ratio);
    read_integer(k, "extreme_period", c.extreme_period);
  }
  if (s.has("output_dir")) {
    std::string dir;
    s.read("output_dir", dir);
    c.output_dir = dir;
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<CaseStudy> expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string(), expected);
}

std::string canonical_json(const ExperimentConfig& c) {
  json root;
  root["case_study"] = to_string(c.case_study);
  root["budget"] = c.budget;
  root["seeds"] = c.seeds;
  json algorithms = json::array();
  for (Algorithm a : c.algorithms) algorithms.push_back(to_string(a));
  root["algorithms"] = algorithms;
  json space = json::object();
  for (const Dimension& d : c.space.dimensions) space[d.name] = {d.lower, d.upper};
  root["design_space"] = space;
  root["simulation"] = {
      {"t_max", c.simulation.t_max},
      {"epsilon", c.simulation.epsilon},
      {"substep", c.simulation.substep},
      {"divergence_threshold", c.simulation.divergence_threshold},
      {"initial_conditions",
       {{"layout", layout_name(c.initial_condition_layout)},
        {"count", c.initial_condition_count}}},
  };
  root["plant"] = {
      {"masses", c.plant.masses},
      {"spring_constants", c.plant.spring_constants},
      {"damping_constants", c.plant.damping_constants},
      {"u_min", c.u_min},
      {"u_max", c.u_max},
  };
  const ResourceModelParams& r = c.fpga;
  root["models"] = {
      {"cpu",
       {{"reference_decision_size", c.cpu_timing.reference_decision_size},
        {"reference_iterations", c.cpu_timing.reference_iterations},
        {"reference_seconds", c.cpu_timing.reference_seconds},
        {"linear_coefficient", c.cpu_timing.linear_coefficient},
        {"wallclock", c.wallclock_timing}}},
      {"fpga",
       {{"lut_capacity", r.lut_capacity},
        {"ff_capacity", r.ff_capacity},
        {"dsp_capacity", r.dsp_capacity},
        {"bram_blocks", r.bram_blocks},
        {"bram_block_bits", r.bram_block_bits},
        {"parallel_macs", r.parallel_macs},
        {"lut_base", r.lut_base},
        {"lut_per_bit_unit", r.lut_per_bit_unit},
        {"lut_per_address_bit", r.lut_per_address_bit},
        {"ff_base", r.ff_base},
        {"ff_per_bit_unit", r.ff_per_bit_unit},
        {"ff_per_address_bit", r.ff_per_address_bit},
        {"pipeline_depth", r.pipeline_depth},
        {"clock_hz", r.clock_hz},
        {"resource_constraint", c.resource_constraint},
        {"state_bound", c.state_bound}}},
  };
  root["search"] = {
      {"bootstrap_fraction", c.bootstrap_fraction},
      {"sub_budget", c.sub_budget},
      {"initial_mesh_fraction", c.initial_mesh_fraction},
      {"min_mesh_ratio", c.min_mesh_ratio},
      {"extreme_period", c.extreme_period},
  };
  return root.dump(2);
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

StudyContext make_study_context(const ExperimentConfig& c, std::uint64_t seed) {
  StudyContext ctx = default_study_context(c.case_study);
  ctx.plant = build_mass_spring_chain(c.plant);
  ctx.initial_conditions = default_initial_conditions(c.initial_condition_layout);
  if (c.initial_condition_count > 0 &&
      static_cast<std::size_t>(c.initial_condition_count) < ctx.initial_conditions.size()) {
    ctx.initial_conditions.resize(c.initial_condition_count);
  }
  for (const Vector& x0 : ctx.initial_conditions) {
    if (x0.size() != ctx.plant.states()) {
      throw ConfigError("plant: the initial condition bank needs " +
                        std::to_string(x0.size() / 2) + " masses");
    }
  }
  ctx.simulation = c.simulation;
  ctx.u_min = Vector::Constant(ctx.plant.inputs(), c.u_min);
  ctx.u_max = Vector::Constant(ctx.plant.inputs(), c.u_max);
  ctx.cpu_time = CpuTimeModel::calibrated(
      c.cpu_timing.reference_decision_size, c.cpu_timing.reference_iterations,
      c.cpu_timing.reference_seconds, c.cpu_timing.linear_coefficient);
  ctx.fpga = c.fpga;
  ctx.state_bound = c.state_bound;
  ctx.resource_constraint = c.resource_constraint;
  ctx.wallclock_timing = c.wallclock_timing;
  ctx.space = c.space;
  ctx.seed = seed;
  return ctx;
}

}  // namespace codesign
