#include <gtest/gtest.h>

#include "support/trivial_cases.hpp"

namespace segcx::testing {
namespace {

class TrivialExamples : public ::testing::TestWithParam<std::size_t> {};

TEST_P(TrivialExamples, Holds) {
  static const std::vector<NamedCheck> checks = trivial_checks();
  const NamedCheck& check = checks.at(GetParam());
  SCOPED_TRACE(check.name);
  EXPECT_TRUE(check.run());
}

INSTANTIATE_TEST_SUITE_P(All, TrivialExamples, ::testing::Range<std::size_t>(0, trivial_checks().size()),
                         [](const ::testing::TestParamInfo<std::size_t>& info) {
                           std::string name = trivial_checks()[info.param].name;
                           for (char& c : name) {
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           }
                           return name;
                         });

}  // namespace
}  // namespace segcx::testing
