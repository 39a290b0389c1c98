#include "dqg/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dqg {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSpecFormat = "dqg-spec";
constexpr const char* kElementFormat = "dqg-element";
constexpr int kVersion = 1;

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw SpecError(path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing field '" + key + "'");
    return *it;
}

const json& array_field(const json& obj, const std::string& key, const std::string& path)
{
    const json& v = field(obj, key, path);
    if (!v.is_array()) fail(path + "/" + key, "expected an array");
    return v;
}

int int_field(const json& obj, const std::string& key, const std::string& path)
{
    const json& v = field(obj, key, path);
    if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
    return v.get<int>();
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

std::string string_field(const json& obj, const std::string& key, const std::string& path)
{
    const json& v = field(obj, key, path);
    if (!v.is_string()) fail(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

json emit_matrix(const Mat& m)
{
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["data"] = std::move(data);
    return out;
}

Mat parse_matrix(const json& v, const std::string& path)
{
    const int rows = int_field(v, "rows", path);
    const int cols = int_field(v, "cols", path);
    if (rows < 0 || cols < 0) fail(path, "negative matrix shape");
    const json& data = array_field(v, "data", path);
    if (static_cast<long>(data.size()) != static_cast<long>(rows) * cols)
        fail(path + "/data", "expected " + std::to_string(rows * cols) + " entries, found " + std::to_string(data.size()));
    Mat m(rows, cols);
    for (int k = 0; k < rows * cols; ++k) {
        const json& z = data[k];
        const std::string zp = path + "/data/" + std::to_string(k);
        if (!z.is_array() || z.size() != 2) fail(zp, "complex entries are [re, im] pairs");
        m(k / cols, k % cols) = cplx(number(z[0], zp + "/0"), number(z[1], zp + "/1"));
    }
    return m;
}

BlockId block_ref(const json& obj, const std::string& key, const BlockLayout& layout, const std::string& path)
{
    const std::string label = string_field(obj, key, path);
    try {
        return layout.find(label);
    } catch (const StructuralError&) {
        fail(path + "/" + key, "unknown block '" + label + "'");
    }
}

json emit_layout(const BlockLayout& layout)
{
    json out = json::array();
    for (const BlockIndex& b : layout.blocks()) {
        json e;
        e["label"] = b.label;
        e["dim"] = b.dim;
        out.push_back(std::move(e));
    }
    return out;
}

BlockLayout parse_layout(const json& arr, const std::string& path)
{
    std::vector<BlockIndex> blocks;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string p = path + "/" + std::to_string(k);
        BlockIndex b{string_field(arr[k], "label", p), int_field(arr[k], "dim", p)};
        if (b.dim < 1) fail(p + "/dim", "block dimension must be >= 1");
        for (const BlockIndex& o : blocks)
            if (o.label == b.label) fail(p + "/label", "duplicate block '" + b.label + "'");
        blocks.push_back(std::move(b));
    }
    if (blocks.empty()) fail(path, "at least one block is required");
    return BlockLayout(std::move(blocks));
}

json emit_blocks(const Element& a, const BlockLayout& layout, const std::string& value_key = "matrix")
{
    json out = json::array();
    for (const auto& [b, m] : a) {
        json e;
        e["block"] = layout.label(b);
        e[value_key] = emit_matrix(m);
        out.push_back(std::move(e));
    }
    return out;
}

Element parse_blocks(const json& arr, const BlockLayout& layout, const std::string& path,
                     const std::string& value_key = "matrix")
{
    if (!arr.is_array()) fail(path, "expected an array");
    Element out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string p = path + "/" + std::to_string(k);
        const BlockId b = block_ref(arr[k], "block", layout, p);
        if (out.contains(b)) fail(p + "/block", "block '" + layout.label(b) + "' listed twice");
        Mat m = parse_matrix(field(arr[k], value_key, p), p + "/" + value_key);
        if (m.rows() != layout.dim(b) || m.cols() != layout.dim(b))
            fail(p + "/" + value_key, "expected a " + std::to_string(layout.dim(b)) + "x" + std::to_string(layout.dim(b)) +
                                          " matrix for block '" + layout.label(b) + "'");
        out.set(b, std::move(m));
    }
    return out;
}

json emit_entries(const std::vector<HomEntry>& entries, const BlockLayout& tl, const BlockLayout& rl)
{
    json out = json::array();
    for (const HomEntry& e : entries) {
        json j;
        j["target"] = tl.label(e.target);
        j["left"] = tl.label(e.left);
        j["right"] = rl.label(e.right);
        j["mult"] = e.mult;
        j["isometry"] = emit_matrix(e.isometry);
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<HomEntry> parse_entries(const json& arr, const BlockLayout& tl, const BlockLayout& rl, const std::string& path)
{
    std::vector<HomEntry> out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string p = path + "/" + std::to_string(k);
        HomEntry e;
        e.target = block_ref(arr[k], "target", tl, p);
        e.left = block_ref(arr[k], "left", tl, p);
        e.right = block_ref(arr[k], "right", rl, p);
        e.mult = int_field(arr[k], "mult", p);
        if (e.mult < 1) fail(p + "/mult", "multiplicity must be >= 1");
        e.isometry = parse_matrix(field(arr[k], "isometry", p), p + "/isometry");
        const int rows = tl.dim(e.left) * rl.dim(e.right), cols = tl.dim(e.target) * e.mult;
        if (e.isometry.rows() != rows || e.isometry.cols() != cols)
            fail(p + "/isometry", "shape mismatch for (" + tl.label(e.target) + ", " + tl.label(e.left) + ", " +
                                      rl.label(e.right) + "): expected " + std::to_string(rows) + "x" +
                                      std::to_string(cols));
        out.push_back(std::move(e));
    }
    return out;
}

json emit_coaction(const Coaction& co, const BlockLayout& alayout)
{
    json out;
    out["algebra"] = emit_layout(co.algebra);
    out["delta"] = emit_entries(co.delta, co.algebra, alayout);
    out["h"] = emit_blocks(co.h, co.algebra);
    return out;
}

Coaction parse_coaction(const json& v, const BlockLayout& alayout, const std::string& path)
{
    Coaction co;
    co.algebra = parse_layout(array_field(v, "algebra", path), path + "/algebra");
    co.delta = parse_entries(array_field(v, "delta", path), co.algebra, alayout, path + "/delta");
    co.h = parse_blocks(field(v, "h", path), co.algebra, path + "/h");
    return co;
}

json emit_cycle(const CycleRep& c, const std::string& kind, const BlockLayout& alayout, const BlockLayout& clayout)
{
    json out;
    out["kind"] = kind;
    out["hdim"] = c.corep.hdim();
    json corep = json::array();
    for (const auto& [b, m] : c.corep.U.blocks) {
        json e;
        e["block"] = alayout.label(b);
        e["matrix"] = emit_matrix(m);
        corep.push_back(std::move(e));
    }
    out["corep"] = std::move(corep);
    json pi = json::array();
    for (std::size_t mu = 0; mu < c.pi.W.size(); ++mu) {
        json e;
        e["block"] = clayout.label(static_cast<BlockId>(mu));
        e["mult"] = c.pi.mult[mu];
        e["isometry"] = emit_matrix(c.pi.W[mu]);
        pi.push_back(std::move(e));
    }
    out["pi"] = std::move(pi);
    out["F"] = emit_matrix(c.F);
    return out;
}

CycleRep parse_cycle(const json& v, const BlockLayout& alayout, const BlockLayout& clayout, const std::string& path,
                     std::string& kind)
{
    CycleRep c;
    kind = string_field(v, "kind", path);
    const int d = int_field(v, "hdim", path);
    if (d < 1) fail(path + "/hdim", "hdim must be >= 1");
    c.corep.U.hdim = d;
    const json& corep = array_field(v, "corep", path);
    for (std::size_t k = 0; k < corep.size(); ++k) {
        const std::string p = path + "/corep/" + std::to_string(k);
        const BlockId b = block_ref(corep[k], "block", alayout, p);
        Mat m = parse_matrix(field(corep[k], "matrix", p), p + "/matrix");
        const int n = d * alayout.dim(b);
        if (m.rows() != n || m.cols() != n) fail(p + "/matrix", "expected " + std::to_string(n) + "x" + std::to_string(n));
        c.corep.U.blocks.set(b, std::move(m));
    }
    const json& pi = array_field(v, "pi", path);
    c.pi.hdim = d;
    c.pi.W.assign(clayout.size(), Mat());
    c.pi.mult.assign(clayout.size(), 0);
    for (std::size_t k = 0; k < pi.size(); ++k) {
        const std::string p = path + "/pi/" + std::to_string(k);
        const BlockId mu = block_ref(pi[k], "block", clayout, p);
        c.pi.mult[mu] = int_field(pi[k], "mult", p);
        c.pi.W[mu] = parse_matrix(field(pi[k], "isometry", p), p + "/isometry");
        if (c.pi.mult[mu] < 1) fail(p + "/mult", "multiplicity must be >= 1");
        if (c.pi.W[mu].rows() != d || c.pi.W[mu].cols() != clayout.dim(mu) * c.pi.mult[mu])
            fail(p + "/isometry", "shape mismatch for block '" + clayout.label(mu) + "'");
    }
    for (BlockId mu : clayout.all())
        if (c.pi.mult[mu] == 0) fail(path + "/pi", "missing block '" + clayout.label(mu) + "'");
    c.F = parse_matrix(field(v, "F", path), path + "/F");
    if (c.F.rows() != d || c.F.cols() != d) fail(path + "/F", "expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
    return c;
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Report the position as line:column.
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        int line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < pos; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw SpecError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed document (" +
                        e.what() + ")");
    }
}

void check_header(const json& doc, const char* format)
{
    if (!doc.is_object()) fail("/", "document must be an object");
    const std::string f = string_field(doc, "format", "");
    if (f != format) fail("/format", std::string("expected '") + format + "', found '" + f + "'");
    const int v = int_field(doc, "version", "");
    if (v != kVersion) fail("/version", "unsupported version " + std::to_string(v));
}

}  // namespace

Cycle SpecDocument::make_cycle() const
{
    if (!coaction) throw SpecError("/coaction: missing section 'coaction'");
    if (!cycle) throw SpecError("/cycle: missing section 'cycle'");
    return {cycle_kind, *coaction, *cycle};
}

SpecDocument parse_spec(const std::string& text)
{
    const json doc = parse_json(text);
    check_header(doc, kSpecFormat);
    for (const char* section : {"name", "blocks", "delta", "antipode", "counit", "window_complete"})
        if (!doc.contains(section)) fail("/", std::string("missing section '") + section + "'");

    SpecDocument out;
    DqgSpec& s = out.spec;
    s.name = string_field(doc, "name", "");
    s.layout = parse_layout(array_field(doc, "blocks", ""), "/blocks");
    s.delta = parse_entries(array_field(doc, "delta", ""), s.layout, s.layout, "/delta");

    const json& anti = array_field(doc, "antipode", "");
    s.antipode.assign(s.size(), AntipodeBlock{-1, Mat()});
    for (std::size_t k = 0; k < anti.size(); ++k) {
        const std::string p = "/antipode/" + std::to_string(k);
        const BlockId b = block_ref(anti[k], "block", s.layout, p);
        if (s.antipode[b].image >= 0) fail(p + "/block", "block '" + s.label(b) + "' listed twice");
        s.antipode[b].image = block_ref(anti[k], "image", s.layout, p);
        s.antipode[b].map = parse_matrix(field(anti[k], "map", p), p + "/map");
    }
    for (BlockId b : s.layout.all())
        if (s.antipode[b].image < 0) fail("/antipode", "missing block '" + s.label(b) + "'");

    s.counit.densities = parse_blocks(field(doc, "counit", ""), s.layout, "/counit", "density");

    if (doc.contains("haar")) {
        const json& h = doc["haar"];
        HaarParams hp;
        const Element K = parse_blocks(field(h, "K", "/haar"), s.layout, "/haar/K");
        const json& ca = array_field(h, "c_alpha", "/haar");
        hp.c_alpha.assign(s.size(), 0.0);
        std::vector<bool> seen(s.size(), false);
        for (std::size_t k = 0; k < ca.size(); ++k) {
            const std::string p = "/haar/c_alpha/" + std::to_string(k);
            const BlockId b = block_ref(ca[k], "block", s.layout, p);
            hp.c_alpha[b] = number(field(ca[k], "value", p), p + "/value");
            seen[b] = true;
        }
        for (BlockId b : s.layout.all()) {
            if (!K.contains(b)) fail("/haar/K", "missing block '" + s.label(b) + "'");
            if (!seen[b]) fail("/haar/c_alpha", "missing block '" + s.label(b) + "'");
            hp.K.push_back(*K.find(b));
        }
        hp.c = number(field(h, "c", "/haar"), "/haar/c");
        s.haar = std::move(hp);
    }

    const json& wc = doc["window_complete"];
    if (wc.is_string()) {
        if (wc.get<std::string>() != "all") fail("/window_complete", "expected \"all\" or a list of pairs");
        s.all_pairs_complete = true;
    } else if (wc.is_array()) {
        for (std::size_t k = 0; k < wc.size(); ++k) {
            const std::string p = "/window_complete/" + std::to_string(k);
            if (!wc[k].is_array() || wc[k].size() != 2 || !wc[k][0].is_string() || !wc[k][1].is_string())
                fail(p, "pairs are [label, label]");
            try {
                s.complete_pairs.insert({s.layout.find(wc[k][0].get<std::string>()), s.layout.find(wc[k][1].get<std::string>())});
            } catch (const StructuralError&) {
                fail(p, "unknown block");
            }
        }
    } else {
        fail("/window_complete", "expected \"all\" or a list of pairs");
    }

    s.finalize();
    if (s.haar) haar_from_spec(s);

    if (doc.contains("coaction")) out.coaction = parse_coaction(doc["coaction"], s.layout, "/coaction");
    if (doc.contains("cycle")) {
        if (!out.coaction) fail("/cycle", "a cycle needs the 'coaction' section");
        out.cycle = parse_cycle(doc["cycle"], s.layout, out.coaction->algebra, "/cycle", out.cycle_kind);
    }
    return out;
}

std::string emit_spec(const SpecDocument& doc)
{
    const DqgSpec& s = doc.spec;
    json out;
    out["format"] = kSpecFormat;
    out["version"] = kVersion;
    out["name"] = s.name;
    out["blocks"] = emit_layout(s.layout);
    out["delta"] = emit_entries(s.delta, s.layout, s.layout);
    json anti = json::array();
    for (BlockId b : s.layout.all()) {
        json e;
        e["block"] = s.label(b);
        e["image"] = s.label(s.antipode[b].image);
        e["map"] = emit_matrix(s.antipode[b].map);
        anti.push_back(std::move(e));
    }
    out["antipode"] = std::move(anti);
    out["counit"] = emit_blocks(s.counit.densities, s.layout, "density");
    if (s.haar) {
        json h;
        json K = json::array(), ca = json::array();
        for (BlockId b : s.layout.all()) {
            json e;
            e["block"] = s.label(b);
            e["matrix"] = emit_matrix(s.haar->K[b]);
            K.push_back(std::move(e));
            json c;
            c["block"] = s.label(b);
            c["value"] = s.haar->c_alpha[b];
            ca.push_back(std::move(c));
        }
        h["K"] = std::move(K);
        h["c_alpha"] = std::move(ca);
        h["c"] = s.haar->c;
        out["haar"] = std::move(h);
    }
    if (s.all_pairs_complete) {
        out["window_complete"] = "all";
    } else {
        json pairs = json::array();
        for (const auto& [a, b] : s.complete_pairs) pairs.push_back(json::array({s.label(a), s.label(b)}));
        out["window_complete"] = std::move(pairs);
    }
    if (doc.coaction) out["coaction"] = emit_coaction(*doc.coaction, s.layout);
    if (doc.cycle) {
        if (!doc.coaction) throw SpecError("/cycle: a cycle needs the 'coaction' section");
        out["cycle"] = emit_cycle(*doc.cycle, doc.cycle_kind, s.layout, doc.coaction->algebra);
    }
    return out.dump(1) + "\n";
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SpecDocument load_spec(const std::string& path)
{
    try {
        return parse_spec(read_file(path));
    } catch (const SpecError& e) {
        throw SpecError(path + ": " + e.what());
    }
}

void save_spec(const std::string& path, const SpecDocument& doc)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError(path + ": cannot write file");
    out << emit_spec(doc);
}

Element parse_element(const std::string& text, const BlockLayout& layout)
{
    const json doc = parse_json(text);
    check_header(doc, kElementFormat);
    return parse_blocks(field(doc, "blocks", ""), layout, "/blocks");
}

std::string emit_element(const Element& a, const BlockLayout& layout)
{
    json out;
    out["format"] = kElementFormat;
    out["version"] = kVersion;
    out["blocks"] = emit_blocks(a, layout);
    return out.dump(1) + "\n";
}

}  // namespace dqg
