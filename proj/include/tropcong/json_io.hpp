#pragma once

// JSON schemas of the command-line tool; needs nlohmann/json on the include path.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tropcong/resolve.hpp"

namespace tropcong::io {

using json = nlohmann::json;

inline constexpr const char* kFormat = "tropcong/1";

/// A JSON value plus its path, so parse errors can say where they happened.
class Node {
public:
    Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    const json& raw() const { return *j_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_ + ": " + what); }

    bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
    Node operator[](const std::string& key) const
    {
        if (!j_->is_object()) fail("expected an object");
        if (!j_->contains(key)) fail("missing key \"" + key + "\"");
        return Node(j_->at(key), path_ + "." + key);
    }
    Node operator[](std::size_t i) const { return Node(j_->at(i), path_ + "[" + std::to_string(i) + "]"); }

    std::vector<Node> items() const
    {
        if (!j_->is_array()) fail("expected an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < j_->size(); ++i) out.push_back((*this)[i]);
        return out;
    }

    std::string str() const
    {
        if (!j_->is_string()) fail("expected a string");
        return j_->get<std::string>();
    }
    bool boolean() const
    {
        if (!j_->is_boolean()) fail("expected true or false");
        return j_->get<bool>();
    }
    std::int64_t integer() const
    {
        if (!j_->is_number_integer()) fail("expected an integer");
        return j_->get<std::int64_t>();
    }
    std::size_t index() const
    {
        auto v = integer();
        if (v < 0) fail("expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }
    Q rational() const
    {
        if (j_->is_number_integer()) return to_q(j_->get<std::int64_t>());
        try {
            return parse_rational(str());
        } catch (const ParseError& e) {
            fail(e.what());
        }
    }
    TropScalar scalar() const
    {
        if (j_->is_string() && j_->get<std::string>() == "-inf") return TropScalar::bottom();
        return TropScalar(rational());
    }

private:
    const json* j_;
    std::string path_;
};

inline json read_file(const std::string& file)
{
    std::ifstream in(file);
    if (!in) throw ParseError(file + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ParseError(file + ": byte " + std::to_string(e.byte) + ": invalid JSON");
    }
}

// ---------------------------------------------------------------- writers

inline json write(const Q& q) { return format_rational(q); }
inline json write(const TropScalar& s) { return s.str(); }

inline json write(const Vec& v)
{
    json a = json::array();
    for (const auto& x : v) a.push_back(write(x));
    return a;
}

inline json write(const Mat& m)
{
    json a = json::array();
    for (const auto& v : m) a.push_back(write(v));
    return a;
}

inline json write(const LexVec& v)
{
    json a = json::array();
    for (const auto& x : v) a.push_back(write(x));
    return a;
}

inline json write_ints(const IVec& v) { return json(v); }

inline json write(const ToricContext& ctx)
{
    json rays = json::array();
    for (const auto& r : ctx.sigma_rays()) rays.push_back(write_ints(to_ivec(r)));
    return {{"rank", ctx.rank()}, {"sigma_rays", rays}, {"coeff", ctx.mode() == CoeffMode::Boolean ? "B" : "T"}};
}

inline json write(const TropPoly& f)
{
    json terms = json::array();
    for (const auto& [u, a] : f.terms()) terms.push_back({{"coeff", write(a)}, {"exp", write_ints(u)}});
    return {{"terms", terms}};
}

inline json write(const PolyPair& p) { return {{"lhs", write(p.first)}, {"rhs", write(p.second)}}; }

inline json write(const Row& r)
{
    const char* rel = r.rel == Rel::Le ? "<=" : r.rel == Rel::Lt ? "<" : "=";
    return {{"a", write(r.a)}, {"b", write(r.b)}, {"rel", rel}};
}

inline json write(const PolyhedronH& p)
{
    json rows = json::array();
    for (const auto& r : p.rows) rows.push_back(write(r));
    return {{"dim", p.dim}, {"rows", rows}};
}

inline json write(const ConeV& v) { return {{"rays", write(v.rays)}, {"lines", write(v.lines)}}; }

/// Rows with -inf in the coordinates of a coordinate face, else rationals plus tau_rays.
inline json write(const PrimeMatrix& p)
{
    const auto& ctx = *p.ctx;
    json out;
    auto coords = ctx.as_coordinate_face(p.face);
    json rows = json::array();
    for (const auto& w : p.rows) {
        json row = json::array({write(w.height)});
        for (std::size_t i = 0; i < ctx.rank(); ++i) {
            bool dead = coords && std::find(coords->begin(), coords->end(), i) != coords->end();
            row.push_back(dead ? json("-inf") : write(w.coords[i]));
        }
        rows.push_back(row);
    }
    out["rows"] = rows;
    if (!coords) out["tau_rays"] = write(ctx.face(p.face).rays);
    return out;
}

inline json write(const FlagOfCones& f)
{
    json cones = json::array();
    for (const auto& c : f.cones) cones.push_back({{"rays", write(c)}});
    return {{"tau_rays", write(f.tau_rays)}, {"cones", cones}};
}

inline json write_step(const Step& s)
{
    switch (s.kind) {
    case Step::Kind::Generator: return {{"op", "gen"}, {"index", s.i}};
    case Step::Kind::Refl: return {{"op", "refl"}, {"poly", write(*s.poly)}};
    case Step::Kind::Sym: return {{"op", "sym"}, {"of", s.i}};
    case Step::Kind::Trans: return {{"op", "trans"}, {"first", s.i}, {"second", s.j}};
    case Step::Kind::AddBoth: return {{"op", "add"}, {"of", s.i}, {"poly", write(*s.poly)}};
    case Step::Kind::MulMono: return {{"op", "mul"}, {"of", s.i}, {"poly", write(*s.poly)}};
    }
    return {};
}

inline json write(const Derivation& d)
{
    json steps = json::array();
    for (const auto& s : d.steps) steps.push_back(write_step(s));
    return {{"steps", steps}};
}

inline json write(const RadicalCertificate& c) { return {{"i", c.i}, {"h", write(c.h)}, {"derivation", write(c.derivation)}}; }

// ---------------------------------------------------------------- readers

inline ContextPtr read_context(const Node& n)
{
    CoeffMode mode = CoeffMode::Rational;
    if (n.has("coeff")) {
        auto c = n["coeff"].str();
        if (c == "B") mode = CoeffMode::Boolean;
        else if (c != "T") n["coeff"].fail("coeff must be \"T\" or \"B\"");
    }
    std::size_t rank = n["rank"].index();
    try {
        if (n.has("preset")) {
            auto p = n["preset"].str();
            if (p == "affine") return ToricContext::affine_space(rank, mode);
            if (p == "torus") return ToricContext::torus(rank, mode);
            n["preset"].fail("preset must be \"affine\" or \"torus\"");
        }
        std::vector<IVec> rays;
        for (const auto& r : n["sigma_rays"].items()) {
            IVec v;
            for (const auto& x : r.items()) v.push_back(x.integer());
            if (v.size() != rank) r.fail("ray has wrong length");
            rays.push_back(v);
        }
        return ToricContext::create(rank, rays, mode);
    } catch (const PreconditionError& e) {
        throw PreconditionError(n.path() + ": " + e.what());
    }
}

inline TropPoly read_poly(const Node& n, const ContextPtr& ctx)
{
    TropPoly f(ctx);
    for (const auto& t : n["terms"].items()) {
        Q a = t.has("coeff") ? t["coeff"].rational() : Q(0);
        IVec u;
        for (const auto& x : t["exp"].items()) u.push_back(x.integer());
        try {
            f.add_term(a, u);
        } catch (const PreconditionError& e) {
            throw PreconditionError(t.path() + ": " + e.what());
        }
    }
    return f;
}

inline PolyPair read_pair(const Node& n, const ContextPtr& ctx) { return {read_poly(n["lhs"], ctx), read_poly(n["rhs"], ctx)}; }

inline Vec read_vec(const Node& n)
{
    Vec v;
    for (const auto& x : n.items()) v.push_back(x.rational());
    return v;
}

inline Mat read_mat(const Node& n)
{
    Mat m;
    for (const auto& r : n.items()) m.push_back(read_vec(r));
    return m;
}

inline CongruencePresentation read_congruence(const Node& n)
{
    CongruencePresentation e;
    e.ctx = read_context(n["context"]);
    if (n.has("pairs"))
        for (const auto& p : n["pairs"].items()) e.pairs.push_back(read_pair(p, e.ctx));
    if (n.has("bend"))
        for (const auto& p : n["bend"].items()) {
            TropPoly f = read_poly(p, e.ctx);
            if (f.is_zero()) p.fail("bend relations of the zero polynomial");
            for (auto& pr : bend_relations(f)) e.pairs.push_back(std::move(pr));
        }
    if (n.has("finite_basis")) e.finite_basis = n["finite_basis"].boolean();
    return e;
}

/// Face from explicit tau_rays.
inline std::size_t read_face(const Node& n, const ToricContext& ctx)
{
    Mat rays = read_mat(n);
    for (const auto& r : rays)
        if (r.size() != ctx.rank()) n.fail("tau ray has wrong length");
    auto f = ctx.find_face(rays);
    if (!f) throw PreconditionError(n.path() + ": not a face of sigma");
    return *f;
}

/// Rows of extended rationals; -inf columns name a coordinate face. Boolean rows may omit the height.
inline PrimeMatrix read_matrix(const Node& n, const ContextPtr& ctx)
{
    const std::size_t r = ctx->rank();
    auto rows = n["rows"].items();
    if (rows.empty()) n["rows"].fail("matrix has no rows");
    std::vector<std::vector<TropScalar>> ext;
    for (const auto& row : rows) {
        std::vector<TropScalar> v;
        for (const auto& x : row.items()) v.push_back(x.scalar());
        if (v.size() == r && ctx->mode() == CoeffMode::Boolean) v.insert(v.begin(), TropScalar(1L));
        if (v.size() != r + 1) row.fail("row needs " + std::to_string(r + 1) + " entries");
        if (v[0].is_bottom()) row[0].fail("height cannot be -inf");
        ext.push_back(v);
    }
    std::vector<std::size_t> dead;
    for (std::size_t i = 0; i < r; ++i) {
        std::size_t count = 0;
        for (const auto& v : ext) count += v[1 + i].is_bottom();
        if (count == ext.size()) dead.push_back(i);
        else if (count != 0) n["rows"].fail("-inf entries must fill whole columns");
    }
    std::size_t face;
    if (n.has("tau_rays")) {
        if (!dead.empty()) n["tau_rays"].fail("use either tau_rays or -inf columns");
        face = read_face(n["tau_rays"], *ctx);
    } else {
        auto f = ctx->coordinate_face(dead);
        if (!f) throw PreconditionError(n["rows"].path() + ": -inf columns do not form a face of sigma");
        face = *f;
    }
    Mat m;
    for (const auto& v : ext) {
        Vec row;
        for (const auto& x : v) row.push_back(x.is_bottom() ? Q(0) : x.value());
        m.push_back(row);
    }
    try {
        return make_prime_matrix(ctx, face, m);
    } catch (const PreconditionError& e) {
        throw PreconditionError(n.path() + ": " + e.what());
    }
}

/// Point {"height", "coords"} with -inf coordinates, or finite coords plus tau_rays.
inline ExtPoint read_point(const Node& n, const ContextPtr& ctx)
{
    Q h = n.has("height") ? n["height"].rational() : Q(1);
    std::vector<TropScalar> c;
    for (const auto& x : n["coords"].items()) c.push_back(x.scalar());
    if (c.size() != ctx->rank()) n["coords"].fail("point has wrong rank");
    std::vector<std::size_t> dead;
    Vec x;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_bottom()) dead.push_back(i);
        x.push_back(c[i].is_bottom() ? Q(0) : c[i].value());
    }
    std::size_t face;
    if (n.has("tau_rays")) {
        if (!dead.empty()) n["tau_rays"].fail("use either tau_rays or -inf coordinates");
        face = read_face(n["tau_rays"], *ctx);
    } else {
        auto f = ctx->coordinate_face(dead);
        if (!f) throw PreconditionError(n["coords"].path() + ": -inf coordinates do not form a face of sigma");
        face = *f;
    }
    try {
        return make_point(*ctx, h, face, x);
    } catch (const PreconditionError& e) {
        throw PreconditionError(n.path() + ": " + e.what());
    }
}

inline PolyhedronH read_polyhedron(const Node& n)
{
    PolyhedronH p{n["dim"].index(), {}};
    for (const auto& r : n["rows"].items()) {
        Vec a = read_vec(r["a"]);
        if (a.size() != p.dim) r["a"].fail("row has wrong length");
        Q b = r.has("b") ? r["b"].rational() : Q(0);
        std::string rel = r.has("rel") ? r["rel"].str() : "<=";
        if (rel == "<=") p.add(a, b, Rel::Le);
        else if (rel == "<") p.add(a, b, Rel::Lt);
        else if (rel == "=" || rel == "==") p.add(a, b, Rel::Eq);
        else if (rel == ">=") p.add(scale(a, Q(-1)), -b, Rel::Le);
        else if (rel == ">") p.add(scale(a, Q(-1)), -b, Rel::Lt);
        else r["rel"].fail("unknown relation \"" + rel + "\"");
    }
    return p;
}

inline Fan read_fan(const Node& n)
{
    Fan f;
    for (const auto& c : n["cones"].items()) {
        Mat rays = read_mat(c["rays"]);
        std::size_t d = n.has("dim") ? n["dim"].index() : (rays.empty() ? 0 : rays.front().size());
        if (f.dim == 0) f.dim = d;
        for (const auto& r : rays)
            if (r.size() != f.dim) c.fail("ray has wrong length");
        f.cones.push_back(cone_of_rays(rays, f.dim));
    }
    if (n.has("dim")) f.dim = n["dim"].index();
    return f;
}

/// Flag rays are (height, coords); coords are reduced modulo span tau on input.
inline FlagOfCones read_flag(const Node& n, const ContextPtr& ctx)
{
    FlagOfCones f;
    f.tau_rays = n.has("tau_rays") ? read_mat(n["tau_rays"]) : Mat{};
    std::size_t face = n.has("tau_rays") ? read_face(n["tau_rays"], *ctx) : ctx->dense_face();
    for (const auto& c : n["cones"].items()) {
        Mat rays;
        for (const auto& r : c["rays"].items()) {
            Vec v = read_vec(r);
            if (v.size() != ctx->rank() + 1) r.fail("ray needs height plus coordinates");
            Vec x = ctx->canonical(face, Vec(v.begin() + 1, v.end()));
            Vec out{v[0]};
            out.insert(out.end(), x.begin(), x.end());
            rays.push_back(out);
        }
        f.cones.push_back(rays);
    }
    return f;
}

inline Derivation read_derivation(const Node& n, const ContextPtr& ctx)
{
    Derivation d;
    for (const auto& s : n["steps"].items()) {
        auto op = s["op"].str();
        Step st;
        if (op == "gen") st = Step{Step::Kind::Generator, s["index"].index(), 0, std::nullopt};
        else if (op == "refl") st = Step{Step::Kind::Refl, 0, 0, read_poly(s["poly"], ctx)};
        else if (op == "sym") st = Step{Step::Kind::Sym, s["of"].index(), 0, std::nullopt};
        else if (op == "trans") st = Step{Step::Kind::Trans, s["first"].index(), s["second"].index(), std::nullopt};
        else if (op == "add") st = Step{Step::Kind::AddBoth, s["of"].index(), 0, read_poly(s["poly"], ctx)};
        else if (op == "mul") st = Step{Step::Kind::MulMono, s["of"].index(), 0, read_poly(s["poly"], ctx)};
        else s["op"].fail("unknown step \"" + op + "\"");
        d.steps.push_back(std::move(st));
    }
    return d;
}

inline RadicalCertificate read_certificate(const Node& n, const ContextPtr& ctx)
{
    return RadicalCertificate{n["i"].index(), read_poly(n["h"], ctx), read_derivation(n["derivation"], ctx)};
}

}  // namespace tropcong::io
