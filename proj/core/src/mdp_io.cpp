#include "oplab/mdp_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oplab {

std::string format_exact(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string mdp_to_json(const Mdp& mdp) {
  std::ostringstream out;
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();
  out << "{\n  \"version\": " << kMdpFormatVersion << ",\n";
  out << "  \"n_states\": " << ns << ",\n  \"n_actions\": " << na << ",\n";
  out << "  \"gamma\": " << format_exact(mdp.gamma()) << ",\n";
  out << "  \"transition\": [";
  for (int x = 0; x < ns; ++x) {
    out << (x ? ",\n    [" : "\n    [");
    for (int a = 0; a < na; ++a) {
      out << (a ? ", [" : "[");
      for (int y = 0; y < ns; ++y) out << (y ? ", " : "") << format_exact(mdp.transition(x, a, y));
      out << "]";
    }
    out << "]";
  }
  out << "\n  ],\n  \"reward\": [";
  for (int x = 0; x < ns; ++x) {
    out << (x ? ", [" : "[");
    for (int a = 0; a < na; ++a) out << (a ? ", " : "") << format_exact(mdp.reward(x, a));
    out << "]";
  }
  out << "],\n  \"initial_dist\": [";
  for (int x = 0; x < ns; ++x) out << (x ? ", " : "") << format_exact(mdp.initial_dist()(x));
  out << "],\n  \"terminal\": [";
  for (int x = 0; x < ns; ++x) out << (x ? ", " : "") << (mdp.is_terminal(x) ? "true" : "false");
  out << "]\n}\n";
  return out.str();
}

Mdp mdp_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("MDP file: ") + e.what());
  }
  try {
    const int version = doc.at("version").get<int>();
    if (version != kMdpFormatVersion) {
      throw std::invalid_argument("MDP file: unsupported version " + std::to_string(version));
    }
    for (const auto& [key, value] : doc.items()) {
      static const char* known[] = {"version", "n_states", "n_actions", "gamma",
                                    "transition", "reward", "initial_dist", "terminal"};
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) throw std::invalid_argument("MDP file: unknown field '" + key + "'");
    }
    const int ns = doc.at("n_states").get<int>();
    const int na = doc.at("n_actions").get<int>();
    if (ns < 1 || na < 1) throw std::invalid_argument("MDP file: dimensions must be positive");
    const auto& tr = doc.at("transition");
    const auto& rw = doc.at("reward");
    const auto& init = doc.at("initial_dist");
    const auto& term = doc.at("terminal");
    if (tr.size() != static_cast<std::size_t>(ns) || rw.size() != static_cast<std::size_t>(ns) ||
        init.size() != static_cast<std::size_t>(ns) || term.size() != static_cast<std::size_t>(ns)) {
      throw std::invalid_argument("MDP file: array lengths disagree with n_states");
    }
    RowMatrix transition(ns * na, ns);
    Eigen::VectorXd reward(ns * na);
    Eigen::VectorXd initial(ns);
    std::vector<bool> terminal(static_cast<std::size_t>(ns));
    for (int x = 0; x < ns; ++x) {
      const auto& tx = tr.at(static_cast<std::size_t>(x));
      const auto& rx = rw.at(static_cast<std::size_t>(x));
      if (tx.size() != static_cast<std::size_t>(na) || rx.size() != static_cast<std::size_t>(na)) {
        throw std::invalid_argument("MDP file: array lengths disagree with n_actions");
      }
      for (int a = 0; a < na; ++a) {
        const auto& row = tx.at(static_cast<std::size_t>(a));
        if (row.size() != static_cast<std::size_t>(ns)) {
          throw std::invalid_argument("MDP file: transition row has wrong length");
        }
        for (int y = 0; y < ns; ++y) transition(x * na + a, y) = row.at(static_cast<std::size_t>(y)).get<double>();
        reward(x * na + a) = rx.at(static_cast<std::size_t>(a)).get<double>();
      }
      initial(x) = init.at(static_cast<std::size_t>(x)).get<double>();
      terminal[static_cast<std::size_t>(x)] = term.at(static_cast<std::size_t>(x)).get<bool>();
    }
    return Mdp(ns, na, std::move(transition), std::move(reward), doc.at("gamma").get<double>(),
               std::move(initial), std::move(terminal));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("MDP file: ") + e.what());
  }
}

void save_mdp(const Mdp& mdp, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << mdp_to_json(mdp);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Mdp load_mdp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return mdp_from_json(buf.str());
}

}  // namespace oplab
