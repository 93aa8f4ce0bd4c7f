#include <catch_amalgamated.hpp>

#include "support.hpp"

namespace {
std::uint64_t g_seed = 0;
}

std::uint64_t nlqw_test::seed() { return g_seed; }

int main(int argc, char* argv[])
{
    Catch::Session session;
    using namespace Catch::Clara;
    auto cli = session.cli() |
               Opt(g_seed, "seed")["--seed"]("seed for randomized property tests (default 0)");
    session.cli(cli);
    if (int rc = session.applyCommandLine(argc, argv); rc != 0)
        return rc;
    return session.run();
}
