#include "ckem/polytope_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace ckem {

namespace {

using nlohmann::json;

// Builds a DOM like nlohmann's own parser, but keeps floating-point literals as their source
// text so "0.3" reaches the rational parser as 3/10 rather than as the nearest double.
class ExactNumberSax : public nlohmann::json_sax<json> {
public:
    json root;

    bool null() override { return put(nullptr); }
    bool boolean(bool v) override { return put(v); }
    bool number_integer(number_integer_t v) override { return put(v); }
    bool number_unsigned(number_unsigned_t v) override { return put(v); }
    bool number_float(number_float_t, const string_t& s) override { return put(std::string(s)); }
    bool string(string_t& v) override { return put(v); }
    bool binary(binary_t&) override { return put(nullptr); }
    bool start_object(std::size_t) override { return open(json::object()); }
    bool end_object() override { return close(); }
    bool start_array(std::size_t) override { return open(json::array()); }
    bool end_array() override { return close(); }
    bool key(string_t& k) override {
        key_ = k;
        return true;
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
        throw InputError(std::string("malformed polytope JSON: ") + ex.what());
    }

private:
    std::vector<json*> stack_;
    std::string key_;

    json* put(json v) {
        if (stack_.empty()) {
            root = std::move(v);
            return &root;
        }
        json& top = *stack_.back();
        if (top.is_array()) {
            top.push_back(std::move(v));
            return &top.back();
        }
        json& slot = top[key_];
        slot = std::move(v);
        return &slot;
    }
    bool open(json v) {
        stack_.push_back(put(std::move(v)));
        return true;
    }
    bool close() {
        stack_.pop_back();
        return true;
    }
};

Rational coordinate(const json& v, std::size_t index) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_unsigned()) return Rational(v.get<unsigned long long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw InputError("vertex " + std::to_string(index) + ": coordinates must be numbers or rational strings");
}

}  // namespace

Polytope parse_polytope_json(std::string_view text) {
    ExactNumberSax sax;
    json::sax_parse(text.begin(), text.end(), &sax);
    const json& doc = sax.root;
    if (!doc.is_object()) throw InputError("polytope JSON must be an object");
    std::string label;
    if (auto it = doc.find("label"); it != doc.end()) {
        if (!it->is_string()) throw InputError("\"label\" must be a string");
        label = it->get<std::string>();
    }
    auto it = doc.find("vertices");
    if (it == doc.end() || !it->is_array()) throw InputError("polytope JSON needs a \"vertices\" array");
    std::vector<ExactPoint> points;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const json& v = (*it)[i];
        if (!v.is_array() || v.size() != 2) throw InputError("vertex " + std::to_string(i) + " must be [x, y]");
        points.push_back({coordinate(v[0], i), coordinate(v[1], i)});
    }
    return Polytope::from_points(std::move(points), std::move(label));
}

Polytope load_polytope(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open polytope file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_polytope_json(buf.str());
}

std::string polytope_to_json(const Polytope& P) {
    json doc;
    if (!P.label().empty()) doc["label"] = P.label();
    json verts = json::array();
    for (const auto& v : P.exact_vertices()) verts.push_back({to_string(v.x), to_string(v.y)});
    doc["vertices"] = std::move(verts);
    return doc.dump();
}

}  // namespace ckem
