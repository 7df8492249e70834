#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "randgreedy/io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = randgreedy::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// File contents after the header line, which records jobs and output_dir.
std::string body(const std::string& path) {
    const std::string text = randgreedy::read_file(path);
    return text.substr(text.find('\n') + 1);
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::current_path() / ("cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"apfree"}).code == 2);
    CHECK(cli({"apfree", "run", "--N", "abc"}).code == 2);
    CHECK(cli({"apfree", "run", "--N", "1000"}).code == 2);  // not prime
    CHECK(cli({"apfree", "run", "--format", "xml"}).code == 2);
    CHECK(cli({"apfree", "run", "--no-such-flag", "1"}).code == 2);
    CHECK(cli({"apfree", "verify", "--input", "/nonexistent"}).code == 2);
    CHECK(cli({"gnd", "witness", "--n", "5000"}).code == 2);  // d missing
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"--version"}).out.find(randgreedy::kVersion) != std::string::npos);
}

TEST_CASE("apfree run and verify") {
    const fs::path dir = fresh_dir("apfree");
    const Result run = cli({"apfree", "run", "--N", "211", "--seed", "4", "--repeat", "3", "--jobs", "2",
                            "--output-dir", dir.string()});
    REQUIRE(run.code == 0);
    const json rows = json::parse(run.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["seed"] == 4);
    CHECK(rows[2]["seed"] == 6);
    for (int s = 4; s <= 6; ++s) {
        CHECK(fs::exists(dir / ("apfree_N211_seed" + std::to_string(s) + ".jsonl")));
        CHECK(fs::exists(dir / ("apfree_N211_seed" + std::to_string(s) + ".I.txt")));
    }
    CHECK(fs::exists(dir / "apfree_summary.json"));

    // Thread count does not change results.
    const fs::path dir1 = fresh_dir("apfree_serial");
    const Result serial = cli({"apfree", "run", "--N", "211", "--seed", "4", "--repeat", "3", "--output_dir",
                               dir1.string()});
    CHECK(serial.out == run.out);
    CHECK(body((dir / "apfree_N211_seed5.jsonl").string()) == body((dir1 / "apfree_N211_seed5.jsonl").string()));

    const std::string ifile = (dir / "apfree_N211_seed4.I.txt").string();
    const Result ok = cli({"apfree", "verify", "--input", ifile});
    CHECK(ok.code == 0);
    CHECK(json::parse(ok.out)["apFree"] == true);

    // Appending the completion of a 3-AP must fail verification.
    std::ofstream bad_file(dir / "bad.I.txt");
    bad_file << "# {\"ring\":{\"N\":211,\"r\":3}}\n1\n2\n3\n";
    bad_file.close();
    const Result bad = cli({"apfree", "verify", "-i", (dir / "bad.I.txt").string()});
    CHECK(bad.code == 1);
    CHECK(json::parse(bad.out)["apFree"] == false);

    std::ofstream junk(dir / "junk.I.txt");
    junk << "1\nhello\n";
    junk.close();
    const Result malformed = cli({"apfree", "verify", "-i", (dir / "junk.I.txt").string(), "--N", "211"});
    CHECK(malformed.code == 2);
    CHECK(malformed.err.find("line 2") != std::string::npos);

    const Result csv = cli({"apfree", "run", "--N", "101", "--format", "csv", "--output-dir", dir.string()});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("seed,terminated_early,", 0) == 0);
}

TEST_CASE("config files and flag precedence") {
    const fs::path dir = fresh_dir("config");
    std::ofstream cfg(dir / "run.cfg");
    cfg << "N = 101\nseed = 9\noutput_dir = " << dir.string() << "\n";
    cfg.close();
    const Result r = cli({"apfree", "run", "--config", (dir / "run.cfg").string(), "--seed", "10"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)[0]["seed"] == 10);
    CHECK(fs::exists(dir / "apfree_N101_seed10.jsonl"));

    std::ofstream bad(dir / "bad.cfg");
    bad << "N = 101\nwhat = 1\n";
    bad.close();
    CHECK(cli({"apfree", "run", "--config", (dir / "bad.cfg").string()}).code == 2);
}

TEST_CASE("dem summary replays transcripts") {
    const fs::path dir = fresh_dir("dem");
    REQUIRE(cli({"apfree", "run", "--N", "211", "--repeat", "2", "--output-dir", dir.string()}).code == 0);
    const Result s = cli({"dem", "summary", "-i", (dir / "apfree_N211_seed1.jsonl").string(), "-i",
                          (dir / "apfree_N211_seed2.jsonl").string()});
    REQUIRE(s.code == 0);
    const json doc = json::parse(s.out);
    CHECK(doc["runs"].size() == 2);
    CHECK(doc["flagMismatches"] == 0);
    const Result csv = cli({"dem", "summary", "--format", "csv", "-i", (dir / "apfree_N211_seed1.jsonl").string()});
    CHECK(csv.code == 0);

    std::ofstream junk(dir / "junk.jsonl");
    junk << "{\"type\":\"header\"}\n{broken\n";
    junk.close();
    const Result bad = cli({"dem", "summary", "-i", (dir / "junk.jsonl").string()});
    CHECK(bad.code == 2);
}

TEST_CASE("vdw subcommands") {
    const fs::path dir = fresh_dir("vdw");
    const Result exact = cli({"vdw", "exact", "--r", "2", "--k", "2", "--output-dir", dir.string()});
    REQUIRE(exact.code == 0);
    CHECK(json::parse(exact.out)["value"] == 3);
    const Result exact33 = cli({"vdw", "exact", "--r", "3", "--k", "3", "--output-dir", dir.string()});
    REQUIRE(exact33.code == 0);
    const json e33 = json::parse(exact33.out);
    CHECK(e33["value"] == 9);
    CHECK(e33["certificate"]["n"] == 8);

    const std::string cert = (dir / "vdw_exact_r3_k3.coloring.txt").string();
    CHECK(cli({"vdw", "check", "-i", cert, "--r", "3", "--k", "3"}).code == 0);
    CHECK(cli({"vdw", "check", "-i", cert, "--r", "3", "--k", "2"}).code == 1);
    CHECK(cli({"vdw", "exact", "--r", "3", "--k", "4", "--nmax", "12", "--output-dir", dir.string()}).code == 1);
    CHECK(cli({"vdw", "exact", "--r", "3", "--k", "3", "--nmax", "99", "--output-dir", dir.string()}).code == 2);

    const Result w = cli({"vdw", "witness", "--N", "1009", "--seed", "2", "--repeat", "2", "--output-dir",
                          dir.string()});
    REQUIRE(w.code == 0);
    const json rows = json::parse(w.out);
    REQUIRE(rows.size() == 2);
    const std::string file = (dir / ("vdw_r3_k" + std::to_string(rows[0]["k"].get<int>()) + "_seed2.coloring.txt"))
                                 .string();
    REQUIRE(fs::exists(file));
    CHECK(cli({"vdw", "check", "-i", file, "--r", "3", "--k", std::to_string(rows[0]["k"].get<int>())}).code == 0);
}

TEST_CASE("trifree run and analyze") {
    const fs::path dir = fresh_dir("trifree");
    const Result r = cli({"trifree", "run", "--n", "512", "--event-samples", "100", "--output-dir", dir.string(),
                          "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("seed,n,steps,edges", 0) == 0);
    const std::string graph = (dir / "trifree_n512_seed1.edges.txt").string();
    REQUIRE(fs::exists(graph));
    CHECK(fs::exists(dir / "trifree_n512_seed1.jsonl"));
    const Result a = cli({"trifree", "analyze", "-i", graph, "--event-samples", "100"});
    REQUIRE(a.code == 0);
    const json j = json::parse(a.out);
    CHECK(j["triangleFree"] == true);
    CHECK(j["n"] == 512);

    std::ofstream tri(dir / "triangle.edges.txt");
    tri << "0 1\n1 2\n0 2\n3 4\n";
    tri.close();
    CHECK(cli({"trifree", "analyze", "-i", (dir / "triangle.edges.txt").string()}).code == 1);
}

TEST_CASE("gnd witness") {
    const fs::path dir = fresh_dir("gnd");
    const Result r = cli({"gnd", "witness", "--n", "5000", "--d", "100", "--gnd-mode", "measured", "--gnd-source",
                          "cayley", "--output-dir", dir.string()});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["verified"] == true);
    CHECK(fs::exists(dir / "gnd_n5000_d100.edges.txt"));
    CHECK(cli({"gnd", "witness", "--n", "5000", "--d", "10", "--output-dir", dir.string()}).code == 2);
    CHECK(cli({"gnd", "witness", "--n", "5000", "--d", "100", "--gnd-source", "magic", "--output-dir",
               dir.string()})
              .code == 2);
}
