#include "oplab/generators.hpp"
#include "oplab/mdp_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace oplab {
namespace {

void expect_identical(const Mdp& a, const Mdp& b) {
  EXPECT_EQ(a.n_states(), b.n_states());
  EXPECT_EQ(a.n_actions(), b.n_actions());
  EXPECT_EQ(a.gamma(), b.gamma());
  EXPECT_EQ(a.transition(), b.transition());
  EXPECT_EQ(a.reward(), b.reward());
  EXPECT_EQ(a.initial_dist(), b.initial_dist());
  EXPECT_EQ(a.terminal(), b.terminal());
}

TEST(MdpIo, RoundTripIsExact) {
  RngStream rng(12);
  const Mdp m = gen_dirichlet_uniform(6, 3, rng);
  expect_identical(m, mdp_from_json(mdp_to_json(m)));
  const Mdp c = gen_chain(7);
  expect_identical(c, mdp_from_json(mdp_to_json(c)));
}

TEST(MdpIo, SeventeenDigits) {
  EXPECT_EQ(format_exact(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_exact(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(MdpIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "oplab_io_test.json";
  RngStream rng(3);
  const Mdp m = gen_garnet(8, 2, 3, rng);
  save_mdp(m, path);
  expect_identical(m, load_mdp(path));
  std::filesystem::remove(path);
}

TEST(MdpIo, RejectsMalformed) {
  const std::string good = mdp_to_json(gen_chain(2));
  EXPECT_THROW(mdp_from_json("{"), std::invalid_argument);
  std::string bad_version = good;
  bad_version.replace(bad_version.find("\"version\": 1"), 12, "\"version\": 9");
  EXPECT_THROW(mdp_from_json(bad_version), std::invalid_argument);
  std::string extra = good;
  extra.insert(1, "\"colour\": 1,");
  EXPECT_THROW(mdp_from_json(extra), std::invalid_argument);
  std::string bad_gamma = good;
  const auto at = bad_gamma.find("\"gamma\": ");
  bad_gamma.replace(at, bad_gamma.find(',', at) - at, "\"gamma\": 1.5");
  EXPECT_THROW(mdp_from_json(bad_gamma), std::invalid_argument);
}

TEST(MdpIo, MissingFile) {
  EXPECT_ANY_THROW(load_mdp("/nonexistent/dir/mdp.json"));
}

}  // namespace
}  // namespace oplab
