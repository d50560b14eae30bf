#include "bicx/config.hpp"
#include "bicx/error.hpp"

#include <doctest.h>

using namespace bicx;

TEST_CASE("minimal discrete config") {
    RunConfig cfg = parse_config("mode = rates\n"
                                 "k = 3\n"
                                 "p1 = [0.4, 0.3, 0.3]\n"
                                 "p_plus = [0.1, 0.05]\n");
    CHECK(cfg.mode == "rates");
    CHECK(cfg.k == 3);
    REQUIRE(cfg.p1.has_value());
    CHECK((*cfg.p1)[1] == 0.3);
    CHECK(cfg.p_plus == std::vector<double>{0.1, 0.05});
    CHECK_FALSE(cfg.continuous.has_value());
}

TEST_CASE("continuous config with comments and overrides") {
    RunConfig cfg = parse_config("# partition run\n"
                                 "mode = partition\n"
                                 "k = 2\n"
                                 "continuous = { family = uniform }\n"
                                 "p_plus = [0.4]\n"
                                 "horizon = 12   # endpoint cap\n"
                                 "x1_grid = 501\n");
    REQUIRE(cfg.continuous.has_value());
    CHECK(cfg.continuous->family == "uniform");
    CHECK(cfg.continuous->params.empty());
    CHECK(cfg.horizon == 12);
    CHECK(cfg.x1_grid == 501);

    RunConfig pl = parse_config("mode = partition\nk = 2\np_plus = [0.3]\n"
                                "continuous = { family = piecewise_linear, "
                                "params = [-1, 0, 0, 0.25, 1, 1] }\n");
    REQUIRE(pl.continuous.has_value());
    CHECK(pl.continuous->params.size() == 6);
}

TEST_CASE("round trip through emit_config") {
    RunConfig cfg = parse_config("mode = audit\nk = 3\np1 = [0.4, 0.3, 0.3]\n"
                                 "p_plus = [0.1, 0.05]\nhorizon = 11\nseed = 99\n"
                                 "reps = 500\ntol = 1e-9\nout = results\n"
                                 "schedule_csv = rates.csv\n");
    CHECK(parse_config(emit_config(cfg)) == cfg);

    RunConfig cont = parse_config("mode = partition\nk = 2\np_plus = [0.4]\n"
                                  "continuous = { family = uniform, params = [1, 2] }\n");
    CHECK(parse_config(emit_config(cont)) == cont);
}

TEST_CASE("strict parsing failures") {
    auto code_of = [](const char* text) {
        try {
            parse_config(text);
        } catch (const error& e) {
            return e.code;
        }
        return errc::io_error;
    };
    CHECK(code_of("mode = rates\nk = 3\np1 = [0.4, 0.3, 0.3]\nbogus = 1\n") == errc::unknown_key);
    CHECK(code_of("k = 3\np1 = [0.4, 0.3, 0.3]\n") == errc::type_mismatch); // no mode
    CHECK(code_of("mode = fly\nk = 2\np1 = [0.4, 0.3, 0.3]\n") == errc::type_mismatch);
    CHECK(code_of("mode = rates\nk = 3\np1 = [0.4, 0.3]\n") == errc::type_mismatch);
    CHECK(code_of("mode = rates\nk = 3\np1 = [0.4, 0.3, 0.3]\nk = 4\n") == errc::type_mismatch);
    CHECK(code_of("mode = rates\nk = 3\n") == errc::type_mismatch); // no prior at all
    CHECK(code_of("mode = rates\nk = 2\np1 = [0.4, 0.3, 0.3]\np_plus = [0.2]\n"
                  "continuous = { family = uniform }\n") == errc::type_mismatch);
    CHECK(code_of("mode = rates\nk = x\np1 = [0.4, 0.3, 0.3]\n") == errc::type_mismatch);
    CHECK(code_of("mode = rates\nk\n") == errc::type_mismatch);
}
