#include "layerscope/layerscope.h"

#include <cstring>
#include <sstream>

#include "layerscope/compatibility.hpp"
#include "layerscope/errors.hpp"
#include "layerscope/json_io.hpp"
#include "layerscope/layers.hpp"
#include "layerscope/scenarios.hpp"

struct ls_observable {
    layerscope::Observable value;
};

struct ls_channel {
    layerscope::Channel value;
};

struct ls_witnesses {
    layerscope::Witnesses value;
};

struct ls_report {
    layerscope::ScenarioReport value;
};

namespace {

thread_local std::string last_error;

ls_status status_of(layerscope::ErrorCode code) {
    using layerscope::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument:
        return LS_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch:
        return LS_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NotHermitian:
        return LS_ERR_NOT_HERMITIAN;
    case ErrorCode::NotCptp:
        return LS_ERR_NOT_CPTP;
    case ErrorCode::Parse:
        return LS_ERR_PARSE;
    case ErrorCode::Internal:
        return LS_ERR_INTERNAL;
    }
    return LS_ERR_INTERNAL;
}

template <typename F>
ls_status guarded(F &&body) {
    last_error.clear();
    try {
        body();
        return LS_OK;
    } catch (const layerscope::Error &e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception &e) {
        last_error = e.what();
        return LS_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return LS_ERR_INTERNAL;
    }
}

ls_status null_argument(const char *what) {
    last_error = std::string(what) + " must not be NULL";
    return LS_ERR_NULL_POINTER;
}

char *dup_string(const std::string &s) {
    char *out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

double effective_tol(double tol) {
    return tol > 0.0 ? tol : layerscope::default_tolerance();
}

}  // namespace

extern "C" {

const char *ls_version(void) {
    return "1.0.0";
}

const char *ls_last_error(void) {
    return last_error.c_str();
}

double ls_default_tolerance(void) {
    return layerscope::default_tolerance();
}

void ls_string_free(char *s) {
    delete[] s;
}

ls_status ls_observable_from_json(const char *json, ls_observable **out) {
    if (!json || !out) {
        return null_argument("json and out");
    }
    return guarded([&] { *out = new ls_observable{layerscope::parse_observable(json)}; });
}

void ls_observable_free(ls_observable *o) {
    delete o;
}

int ls_observable_dim(const ls_observable *o) {
    return o ? o->value.dim() : 0;
}

int ls_observable_outcomes(const ls_observable *o) {
    return o ? o->value.outcome_count() : 0;
}

ls_status ls_validate_observable_json(const char *json, double tol, int *valid, char **diagnostics) {
    if (!json || !valid) {
        return null_argument("json and valid");
    }
    return guarded([&] {
        auto diag = layerscope::validate_povm(layerscope::parse_observable(json), effective_tol(tol));
        *valid = diag.valid ? 1 : 0;
        if (diagnostics) {
            std::ostringstream text;
            for (const auto &m : diag.messages) {
                text << m << "\n";
            }
            *diagnostics = dup_string(text.str());
        }
    });
}

ls_status ls_channel_from_json(const char *json, double tol, ls_channel **out) {
    if (!json || !out) {
        return null_argument("json and out");
    }
    return guarded([&] { *out = new ls_channel{layerscope::parse_channel(json, effective_tol(tol))}; });
}

void ls_channel_free(ls_channel *c) {
    delete c;
}

ls_status ls_witnesses_from_json(const char *json, double tol, ls_witnesses **out) {
    if (!json || !out) {
        return null_argument("json and out");
    }
    return guarded([&] { *out = new ls_witnesses{layerscope::parse_witnesses(json, effective_tol(tol))}; });
}

void ls_witnesses_free(ls_witnesses *w) {
    delete w;
}

ls_status ls_classify(const ls_observable *a, const ls_observable *b, const ls_witnesses *witnesses, double tol,
                      ls_format format, char **out, int *layer) {
    if (!a || !b) {
        return null_argument("observables");
    }
    return guarded([&] {
        layerscope::LayerOptions opts;
        opts.tol = effective_tol(tol);
        static const layerscope::Witnesses none;
        auto v = layerscope::classify_pair_general(a->value, b->value, witnesses ? witnesses->value : none, opts);
        if (layer) {
            *layer = static_cast<int>(v.strongest_layer);
        }
        if (out) {
            *out = dup_string(format == LS_FORMAT_JSON ? layerscope::verdict_to_json(v) + "\n"
                                                       : layerscope::verdict_to_text(v));
        }
    });
}

ls_status ls_degree(const ls_observable *a, const ls_observable *b, double bracket_tol, double *degree,
                    double *lower, double *upper) {
    if (!a || !b || !degree) {
        return null_argument("observables and degree");
    }
    return guarded([&] {
        layerscope::DegreeOptions opts;
        if (bracket_tol > 0.0) {
            opts.bracket_tol = bracket_tol;
        }
        auto r = layerscope::degree_of_compatibility(a->value, b->value, opts);
        *degree = r.degree;
        if (lower) {
            *lower = r.lower;
        }
        if (upper) {
            *upper = r.upper;
        }
    });
}

ls_status ls_verify_broadcast(const ls_channel *channel, const ls_observable *a, const ls_observable *b,
                              double tol, int *holds, int *one_side, double *residual) {
    if (!channel || !a || !holds) {
        return null_argument("channel, a and holds");
    }
    return guarded([&] {
        const double t = effective_tol(tol);
        layerscope::BroadcastingChannel l(channel->value);
        double worst = layerscope::broadcast_residual(l, a->value);
        if (b) {
            worst = std::max(worst, layerscope::broadcast_residual(l, b->value));
        }
        *holds = worst <= t ? 1 : 0;
        if (one_side) {
            *one_side = b && layerscope::one_side_broadcasts(l, a->value, b->value, t) ? 1 : 0;
        }
        if (residual) {
            *residual = worst;
        }
    });
}

size_t ls_scenario_count(void) {
    return layerscope::scenario_names().size();
}

const char *ls_scenario_name(size_t index) {
    const auto &names = layerscope::scenario_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

ls_status ls_repro_run(const char *name, uint64_t seed, int trials, int include_timing, ls_report **out) {
    if (!name || !out) {
        return null_argument("name and out");
    }
    return guarded([&] {
        layerscope::ScenarioOptions opts;
        opts.seed = seed;
        if (trials > 0) {
            opts.trials = trials;
        }
        opts.include_timing = include_timing != 0;
        *out = new ls_report{layerscope::run_scenario(name, opts)};
    });
}

int ls_report_passed(const ls_report *r) {
    return r && r->value.passed() ? 1 : 0;
}

ls_status ls_report_render(const ls_report *const *reports, size_t count, ls_format format, char **out) {
    if ((!reports && count > 0) || !out) {
        return null_argument("reports and out");
    }
    return guarded([&] {
        std::vector<layerscope::ScenarioReport> list;
        for (size_t i = 0; i < count; ++i) {
            if (!reports[i]) {
                layerscope::fail(layerscope::ErrorCode::InvalidArgument, "NULL report in list");
            }
            list.push_back(reports[i]->value);
        }
        *out = dup_string(format == LS_FORMAT_JSON ? layerscope::render_json(list) : layerscope::render_text(list));
    });
}

void ls_report_free(ls_report *r) {
    delete r;
}

}  // extern "C"
