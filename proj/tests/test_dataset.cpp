#include "qdt/experiment.hpp"
#include "qdt/datagen.hpp"
#include <catch2/catch_amalgamated.hpp>
TEST_CASE("smoke") { REQUIRE(qdt::datagen::make_toy().num_rows() == 12); }
