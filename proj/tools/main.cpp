#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "layerscope/layerscope.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct InputError {
    std::string message;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError{"cannot read " + path};
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void check(ls_status status, const std::string &context) {
    if (status != LS_OK) {
        throw InputError{context + ": " + ls_last_error()};
    }
}

struct StringDeleter {
    void operator()(char *s) const {
        ls_string_free(s);
    }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ObservableDeleter {
    void operator()(ls_observable *o) const {
        ls_observable_free(o);
    }
};
using OwnedObservable = std::unique_ptr<ls_observable, ObservableDeleter>;

struct ChannelDeleter {
    void operator()(ls_channel *c) const {
        ls_channel_free(c);
    }
};

struct WitnessesDeleter {
    void operator()(ls_witnesses *w) const {
        ls_witnesses_free(w);
    }
};

struct ReportDeleter {
    void operator()(ls_report *r) const {
        ls_report_free(r);
    }
};

OwnedObservable load_observable(const std::string &path) {
    ls_observable *raw = nullptr;
    check(ls_observable_from_json(read_file(path).c_str(), &raw), path);
    return OwnedObservable(raw);
}

int run_validate(const std::string &path) {
    int valid = 0;
    char *diag = nullptr;
    check(ls_validate_observable_json(read_file(path).c_str(), 0.0, &valid, &diag), path);
    OwnedString owned(diag);
    if (valid) {
        std::cout << path << ": valid POVM\n";
        return kExitOk;
    }
    std::cerr << path << ": invalid POVM\n" << owned.get();
    return kExitInput;
}

int run_classify(const std::string &path_a, const std::string &path_b, const std::vector<std::string> &witness_paths,
                 bool json) {
    auto a = load_observable(path_a);
    auto b = load_observable(path_b);
    std::unique_ptr<ls_witnesses, WitnessesDeleter> witnesses;
    if (witness_paths.size() > 1) {
        std::string combined = "{\"witnesses\": [";
        for (size_t i = 0; i < witness_paths.size(); ++i) {
            combined += (i ? "," : "") + read_file(witness_paths[i]);
        }
        combined += "]}";
        ls_witnesses *raw = nullptr;
        check(ls_witnesses_from_json(combined.c_str(), 0.0, &raw), "witnesses");
        witnesses.reset(raw);
    } else if (witness_paths.size() == 1) {
        ls_witnesses *raw = nullptr;
        check(ls_witnesses_from_json(read_file(witness_paths[0]).c_str(), 0.0, &raw), witness_paths[0]);
        witnesses.reset(raw);
    }
    char *out = nullptr;
    check(ls_classify(a.get(), b.get(), witnesses.get(), 0.0, json ? LS_FORMAT_JSON : LS_FORMAT_TEXT, &out,
                      nullptr),
          "classify");
    OwnedString owned(out);
    std::cout << owned.get();
    return kExitOk;
}

int run_degree(const std::string &path_a, const std::string &path_b, double tol) {
    auto a = load_observable(path_a);
    auto b = load_observable(path_b);
    double degree = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    check(ls_degree(a.get(), b.get(), tol, &degree, &lower, &upper), "degree");
    std::printf("degree of compatibility: %.9f (bracket [%.9f, %.9f])\n", degree, lower, upper);
    return kExitOk;
}

int run_verify_broadcast(const std::string &channel_path, const std::string &path_a, const std::string &path_b) {
    ls_channel *raw = nullptr;
    check(ls_channel_from_json(read_file(channel_path).c_str(), 0.0, &raw), channel_path);
    std::unique_ptr<ls_channel, ChannelDeleter> channel(raw);
    auto a = load_observable(path_a);
    OwnedObservable b;
    if (!path_b.empty()) {
        b = load_observable(path_b);
    }
    int holds = 0;
    int one_side = 0;
    double residual = 0.0;
    check(ls_verify_broadcast(channel.get(), a.get(), b.get(), 0.0, &holds, &one_side, &residual),
          "verify-broadcast");
    std::printf("broadcasts %s: %s (residual %.3e)\n", b ? "both observables" : "the observable",
                holds ? "yes" : "no", residual);
    if (b) {
        std::printf("one-side broadcasts (A left, B right): %s\n", one_side ? "yes" : "no");
    }
    return holds ? kExitOk : kExitFailed;
}

int run_repro(const std::string &which, const std::string &json_path, uint64_t seed, int trials, bool timing) {
    std::vector<std::string> names;
    if (which == "all") {
        for (size_t i = 0; i < ls_scenario_count(); ++i) {
            names.emplace_back(ls_scenario_name(i));
        }
    } else {
        names.push_back(which);
    }
    std::vector<std::unique_ptr<ls_report, ReportDeleter>> reports;
    std::vector<const ls_report *> views;
    bool passed = true;
    for (const auto &name : names) {
        ls_report *raw = nullptr;
        check(ls_repro_run(name.c_str(), seed, trials, timing ? 1 : 0, &raw), "repro " + name);
        reports.emplace_back(raw);
        views.push_back(raw);
        passed = passed && ls_report_passed(raw);
    }
    char *text = nullptr;
    check(ls_report_render(views.data(), views.size(), LS_FORMAT_TEXT, &text), "render");
    OwnedString owned_text(text);
    std::cout << owned_text.get();
    if (!json_path.empty()) {
        char *json = nullptr;
        check(ls_report_render(views.data(), views.size(), LS_FORMAT_JSON, &json), "render");
        OwnedString owned_json(json);
        std::ofstream out(json_path, std::ios::binary);
        out << owned_json.get();
        if (!out) {
            throw InputError{"cannot write " + json_path};
        }
    }
    return passed ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Classify pairs of quantum observables into layers of classicality"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ls_version()));

    std::string file_a;
    std::string file_b;
    std::string channel_file;
    std::vector<std::string> witness_files;
    bool json_output = false;
    double degree_tol = 1e-6;
    std::string scenario;
    std::string json_path;
    uint64_t seed = 20240001;
    int trials = 200;
    bool no_timing = false;

    auto *validate = app.add_subcommand("validate", "Check that an observable file holds a valid POVM");
    validate->add_option("file", file_a, "Observable JSON")->required();

    auto *classify = app.add_subcommand("classify", "Strongest certified layer of a pair");
    classify->add_option("fileA", file_a, "First observable")->required();
    classify->add_option("fileB", file_b, "Second observable")->required();
    classify->add_option("--witness", witness_files, "Broadcasting channel, instrument or ancilla witness");
    classify->add_flag("--json", json_output, "Print the verdict as JSON");

    auto *degree = app.add_subcommand("degree", "Degree of compatibility under uniform noise");
    degree->add_option("fileA", file_a, "First observable")->required();
    degree->add_option("fileB", file_b, "Second observable")->required();
    degree->add_option("--tol", degree_tol, "Bisection bracket width")->check(CLI::PositiveNumber);

    auto *verify = app.add_subcommand("verify-broadcast", "Check the broadcast identities of a channel");
    verify->add_option("channel", channel_file, "Channel JSON (dim_out = dim_in^2)")->required();
    verify->add_option("fileA", file_a, "Observable")->required();
    verify->add_option("fileB", file_b, "Second observable");

    auto *repro = app.add_subcommand("repro", "Run a reproduction scenario or all of them");
    repro->add_option("scenario", scenario, "Scenario name or 'all'")->required();
    repro->add_option("--json", json_path, "Write machine-readable reports to this file");
    repro->add_option("--seed", seed, "Seed for randomized scenarios");
    repro->add_option("--trials", trials, "Trials for randomized scenarios")->check(CLI::PositiveNumber);
    repro->add_flag("--no-timing", no_timing, "Report runtime_ms as 0 for byte-stable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*validate) {
            return run_validate(file_a);
        }
        if (*classify) {
            return run_classify(file_a, file_b, witness_files, json_output);
        }
        if (*degree) {
            return run_degree(file_a, file_b, degree_tol);
        }
        if (*verify) {
            return run_verify_broadcast(channel_file, file_a, file_b);
        }
        return run_repro(scenario, json_path, seed, trials, !no_timing);
    } catch (const InputError &e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitInput;
    }
}
