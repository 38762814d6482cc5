#ifdef PROMISE_BIN

#include "promise/problems.hpp"
#include "promise/structure.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace promise;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;

    Scratch() {
        dir = fs::temp_directory_path() / ("promise-cli-" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }

    std::string write(const std::string& name, const std::string& text) const {
        auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string read(const std::string& name) const {
        std::ifstream in(dir / name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

int run(const Scratch& s, const std::string& args) {
    auto cmd = std::string(PROMISE_BIN) + " " + args + " >" + (s.dir / "out").string() + " 2>" +
               (s.dir / "err").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("cli run and verify") {
    Scratch s;
    auto prog = s.write("even.prog", program_text(ProblemId::Even));
    auto four = s.write("four.struct", serialize_structure(size_structure(ProblemId::Even, 4)));
    auto three = s.write("three.struct", serialize_structure(size_structure(ProblemId::Even, 3)));
    auto wit = (s.dir / "w.json").string();

    CHECK(run(s, "run --program " + prog + " --structure " + four + " --witness " + wit) == 0);
    CHECK(s.read("out").find("verdict: yes") != std::string::npos);
    CHECK(run(s, "verify --program " + prog + " --structure " + four + " --witness " + wit) == 0);
    CHECK(run(s, "verify --program " + prog + " --structure " + three + " --witness " + wit) == 1);
    CHECK(s.read("err").find("hash mismatch") != std::string::npos);

    CHECK(run(s, "run --program " + prog + " --structure " + three) == 1);
    CHECK(run(s, "run --program " + prog + " --structure " + four + " --max-len 3") == 2);

    CHECK(run(s, "run --format json --no-timing --program " + prog + " --structure " + three) == 1);
    auto j = nlohmann::json::parse(s.read("out"));
    CHECK(j["verdict"] == "no");
    CHECK_FALSE(j.contains("seconds"));
}

TEST_CASE("cli usage and input errors") {
    Scratch s;
    auto prog = s.write("bad.prog", "reg P\nmodule M { Q(x) <~ adom(x) }\nterm: M\n");
    auto st = s.write("s.struct", "domain a\nreg P");
    CHECK(run(s, "run --program " + prog + " --structure " + st) == 64);
    CHECK(s.read("err").find("2:") != std::string::npos);
    CHECK(run(s, "run --structure " + st) == 64);
    CHECK(run(s, "frobnicate") == 64);
    CHECK(run(s, "run --program " + (s.dir / "missing").string() + " --structure " + st) == 64);
    CHECK(run(s, "verify --program " + prog + " --structure " + st + " --witness " + st) == 1);
}

TEST_CASE("cli equivalence") {
    Scratch s;
    auto prog = s.write("p.prog", "reg P Q\nmodule GuessP { P(x) <~ adom(x) }\nmodule GuessQ { Q(x) <~ adom(x) }\nterm: id\n");
    auto st = s.write("s.struct", "domain a b\nreg P Q");
    auto base = "equiv --program " + prog + " --structure " + st;
    CHECK(run(s, base + " --left 'GuessP' --right 'GuessP ; id'") == 0);
    CHECK(run(s, base + " --left 'GuessP' --right 'GuessQ'") == 1);
    CHECK(run(s, base + " --left 'GuessP' --right 'GuessP ; GuessP'") == 1);
    CHECK(run(s, base + " --mode before-after --left 'GuessP' --right 'GuessP ; GuessP'") == 0);
    CHECK(run(s, base + " --max-len 1 --left 'GuessP' --right 'GuessP'") == 2);
    CHECK(run(s, base + " --left 'Nope' --right 'GuessP'") == 64);
}

TEST_CASE("cli suite and emit") {
    Scratch s;
    CHECK(run(s, "suite --problem even --n-range 1..4 --trials 2 --seed 5 --no-timing") == 0);
    CHECK(run(s, "suite --problem st-conn --n-range 2..3 --trials 3 --format json --no-timing") == 0);
    auto j = nlohmann::json::parse(s.read("out"));
    CHECK(j.dump().find("bound") != std::string::npos);
    CHECK(run(s, "suite --problem nope") == 64);

    CHECK(run(s, "emit --problem size-four") == 0);
    CHECK(s.read("out") == program_text(ProblemId::SizeFour));
    CHECK(run(s, "emit --problem st-conn --instance --n 4 --seed 9") == 0);
    auto first = s.read("out");
    CHECK(run(s, "emit --problem st-conn --instance --n 4 --seed 9") == 0);
    CHECK(s.read("out") == first);
    CHECK_NOTHROW(parse_structure(first));
}

#endif
