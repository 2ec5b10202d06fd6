#include "riskm/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace riskm {

namespace {

std::string fmt_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_compact(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::null:
            out += "null";
            break;
        case Json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case Json::value_t::number_integer:
        case Json::value_t::number_unsigned:
            out += j.dump();
            break;
        case Json::value_t::number_float:
            out += fmt_double(j.get<double>());
            break;
        case Json::value_t::string:
            out += j.dump();  // quoted and escaped
            break;
        case Json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ',';
                first = false;
                write_compact(item, out);
            }
            out += ']';
            break;
        }
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                write_compact(it.value(), out);
            }
            out += '}';
            break;
        }
        default:
            throw_domain("serialize: unsupported value type");
    }
}

double num_at(const Json& j, const std::string& what) {
    if (!j.is_number()) throw_domain(what + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw_domain(what + ": non-finite number");
    return v;
}

const Json& member(const Json& j, const char* key, const std::string& what) {
    if (!j.is_object()) throw_domain(what + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw_domain(what + ": missing \"" + key + "\"");
    return *it;
}

std::vector<Interval> intervals_at(const Json& j, const std::string& what) {
    if (!j.is_array()) throw_domain(what + ": expected an array of [a,b] pairs");
    std::vector<Interval> out;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2)
            throw_domain(what + ": each interval must be an [a,b] pair");
        out.push_back({num_at(item[0], what), num_at(item[1], what)});
    }
    return out;
}

std::vector<LinearPiece> pieces_at(const Json& j, const std::string& what) {
    const Json& arr = member(j, "pieces", what);
    if (!arr.is_array()) throw_domain(what + ": \"pieces\" must be an array");
    std::vector<LinearPiece> out;
    for (const auto& item : arr) {
        out.push_back({num_at(member(item, "t0", what), what),
                       num_at(member(item, "t1", what), what),
                       num_at(member(item, "v0", what), what),
                       num_at(member(item, "v1", what), what)});
    }
    return out;
}

Json interval_json(const Interval& iv) { return Json::array({iv.a, iv.b}); }

Json pieces_json(const std::vector<LinearPiece>& pieces) {
    Json arr = Json::array();
    for (const auto& p : pieces) {
        Json row;
        row["t0"] = p.t0;
        row["t1"] = p.t1;
        row["v0"] = p.v0;
        row["v1"] = p.v1;
        arr.push_back(std::move(row));
    }
    Json out;
    out["pieces"] = std::move(arr);
    return out;
}

DistortionFn named_distortion(const Json& j) {
    const std::string name = member(j, "name", "distortion").get<std::string>();
    const auto p = [&](const char* key) {
        return num_at(member(j, key, "distortion \"" + name + "\""), key);
    };
    if (name == "var") return DistortionFn::var(p("p"));
    if (name == "var_plus") return DistortionFn::var_plus(p("p"));
    if (name == "es") return DistortionFn::es(p("p"));
    if (name == "mean") return DistortionFn::mean();
    if (name == "ess_sup") return DistortionFn::ess_sup();
    if (name == "mean_median_dev") return DistortionFn::mean_median_dev();
    if (name == "gini_shortfall")
        return DistortionFn::gini_shortfall(p("alpha"), p("lambda"));
    if (name == "maxvar") return DistortionFn::maxvar(p("alpha"));
    throw_domain("distortion: unknown name \"" + name + "\"");
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw_domain(what + ": " + e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_domain("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

std::string dump_json(const Json& j) {
    std::string out;
    write_compact(j, out);
    return out;
}

Plrv plrv_from_json(const Json& j) {
    return Plrv::from_pieces(pieces_at(j, "variable"));
}

Event event_from_json(const Json& j) {
    return Event::from_intervals(
        intervals_at(member(j, "intervals", "event"), "event"));
}

ClosedSet closedset_from_json(const Json& j) {
    return ClosedSet::from_intervals(
        intervals_at(member(j, "intervals", "index set"), "index set"));
}

MonoFn monofn_from_json(const Json& j) {
    return MonoFn::from_pieces(pieces_at(j, "monotone function"));
}

DistortionFn distortion_from_json(const Json& j) {
    if (j.is_object() && j.contains("name")) return named_distortion(j);
    const Json& arr = member(j, "knots", "distortion");
    if (!arr.is_array()) throw_domain("distortion: \"knots\" must be an array");
    std::vector<DistortionKnot> knots;
    for (const auto& item : arr) {
        DistortionKnot k;
        k.t = num_at(member(item, "t", "distortion knot"), "distortion knot t");
        k.value =
            num_at(member(item, "value", "distortion knot"), "distortion knot value");
        k.left = item.contains("left")
                     ? num_at(item.at("left"), "distortion knot left")
                     : k.value;
        k.right = item.contains("right")
                      ? num_at(item.at("right"), "distortion knot right")
                      : k.value;
        knots.push_back(k);
    }
    std::vector<double> curvature;
    if (j.contains("curvature")) {
        const Json& cj = j.at("curvature");
        if (!cj.is_array())
            throw_domain("distortion: \"curvature\" must be an array");
        for (const auto& item : cj)
            curvature.push_back(num_at(item, "distortion curvature"));
    }
    return DistortionFn::from_knots(std::move(knots), std::move(curvature));
}

Spectrum spectrum_from_json(const Json& j) {
    return Spectrum::from_monofn(MonoFn::from_pieces(pieces_at(j, "spectrum")));
}

GapCopulaSpec gapspec_from_json(const Json& j) {
    const Json& arr = member(j, "gaps", "coupling spec");
    if (!arr.is_array()) throw_domain("coupling spec: \"gaps\" must be an array");
    GapCopulaSpec spec;
    for (const auto& item : arr) {
        const Json& ivj = member(item, "interval", "coupling spec");
        if (!ivj.is_array() || ivj.size() != 2)
            throw_domain("coupling spec: \"interval\" must be an [a,b] pair");
        GapCoupling gc;
        gc.gap = {num_at(ivj[0], "coupling interval"),
                  num_at(ivj[1], "coupling interval")};
        const std::string name =
            member(item, "copula", "coupling spec").get<std::string>();
        if (name == "comonotone")
            gc.kind = CouplingKind::comonotone;
        else if (name == "countermonotone")
            gc.kind = CouplingKind::countermonotone;
        else if (name == "independent")
            gc.kind = CouplingKind::independent;
        else if (name == "swap_blocks")
            gc.kind = CouplingKind::swap_blocks;
        else
            throw_domain("coupling spec: unknown copula \"" + name + "\"");
        if (item.contains("param") && !item.at("param").is_null())
            gc.param = num_at(item.at("param"), "coupling param");
        spec.gaps.push_back(gc);
    }
    return spec;
}

Json plrv_to_json(const Plrv& x) { return pieces_json(x.pieces()); }

Json event_to_json(const Event& e) {
    Json arr = Json::array();
    for (const auto& iv : e.intervals()) arr.push_back(interval_json(iv));
    Json out;
    out["intervals"] = std::move(arr);
    return out;
}

Json closedset_to_json(const ClosedSet& k) {
    Json arr = Json::array();
    for (const auto& iv : k.intervals()) arr.push_back(interval_json(iv));
    Json out;
    out["intervals"] = std::move(arr);
    return out;
}

Json monofn_to_json(const MonoFn& f) { return pieces_json(f.pieces()); }

Json certificate_to_json(const TailCertificate& c) {
    Json out;
    out["p"] = c.p;
    out["event"] = event_to_json(c.event);
    Json verdicts = Json::array();
    for (bool v : c.verdicts) verdicts.push_back(v);
    out["verdicts"] = std::move(verdicts);
    return out;
}

Json report_to_json(const ConcentrationReport& r) {
    Json out;
    out["concentrated"] = r.ok;
    if (r.failing_p.has_value()) out["failing_p"] = *r.failing_p;
    if (r.failing_layer.has_value())
        out["failing_layer"] = interval_json(*r.failing_layer);
    Json certs = Json::array();
    for (const auto& c : r.certificates) certs.push_back(certificate_to_json(c));
    out["certificates"] = std::move(certs);
    return out;
}

Json mixture_to_json(const ESMixture& m) {
    Json out;
    out["lambda0"] = m.lambda0;
    Json terms = Json::array();
    for (const auto& t : m.terms) {
        Json row;
        row["alpha"] = t.alpha;
        row["lambda"] = t.lambda;
        terms.push_back(std::move(row));
    }
    out["terms"] = std::move(terms);
    return out;
}

Json core_to_json(const AdditivityCore& ac) {
    Json out;
    out["core"] = closedset_to_json(ac.core);
    Json flags = Json::array();
    for (const auto& f : ac.flags) {
        Json row;
        row["p"] = f.p;
        row["side"] = f.left ? "left" : "right";
        flags.push_back(std::move(row));
    }
    out["flags"] = std::move(flags);
    return out;
}

}  // namespace riskm
