#pragma once

// Instance files: a JSON document describing an anchor set, one or two
// frames, named operators on X_F and named ambient vectors.
//
//   {
//     "dimension": 3,
//     "anchors": [[0, 0, 1]],
//     "frame": [[1, 0, 0], [0, 1, 0], [1, 1, 0]],
//     "second_frame": [[...], ...],          (optional)
//     "operators": {"U": [[2, 0], [0, 2]]},  (optional, k x k, row-major)
//     "vectors": {"f": [5, -2, 7]}           (optional)
//   }
//
// serialize_instance writes every number with 17 significant digits, so a
// write/read cycle reproduces each double bit for bit.

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nframe/frames.hpp"
#include "nframe/nspace.hpp"

namespace nframe {

struct InstanceFile {
  Index dimension = 0;
  std::vector<AmbientVector> anchors;
  std::vector<AmbientVector> frame;
  std::optional<std::vector<AmbientVector>> second_frame;
  std::map<std::string, Matrix> operators;
  std::map<std::string, AmbientVector> vectors;

  Index rank() const { return dimension - static_cast<Index>(anchors.size()); }
};

namespace detail {

inline AmbientVector parse_vector(const nlohmann::json& j, Index d, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of numbers");
  if (d >= 0 && static_cast<Index>(j.size()) != d)
    throw InputError(what + ": expected " + std::to_string(d) + " entries, got " + std::to_string(j.size()));
  AmbientVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(what + ": non-numeric entry");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  require_finite(v, what);
  return v;
}

inline std::vector<AmbientVector> parse_vector_list(const nlohmann::json& j, Index d, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of vectors");
  std::vector<AmbientVector> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_vector(j[i], d, what + "[" + std::to_string(i) + "]"));
  return out;
}

inline Matrix parse_matrix(const nlohmann::json& j, Index k, const std::string& what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != k)
    throw InputError(what + ": expected " + std::to_string(k) + " rows");
  Matrix m(k, k);
  for (Index r = 0; r < k; ++r) m.row(r) = parse_vector(j[static_cast<std::size_t>(r)], k, what).transpose();
  return m;
}

inline void write_number(std::ostream& os, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

inline void write_vector(std::ostream& os, const Vector& v) {
  os << '[';
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    write_number(os, v(i));
  }
  os << ']';
}

inline void write_vector_list(std::ostream& os, const std::vector<AmbientVector>& vs, const char* indent) {
  os << '[';
  for (std::size_t i = 0; i < vs.size(); ++i) {
    os << (i ? ",\n" : "\n") << indent << "  ";
    write_vector(os, vs[i]);
  }
  if (!vs.empty()) os << '\n' << indent;
  os << ']';
}

}  // namespace detail

// Structural validation only: shapes and finiteness. Anchor independence is
// checked by resolve_instance.
inline InstanceFile parse_instance(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("instance: top level must be an object");
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    throw InputError("instance: missing integer field \"dimension\"");
  InstanceFile inst;
  inst.dimension = j["dimension"].get<Index>();
  if (inst.dimension < 2) throw InputError("instance: dimension must be at least 2");
  if (!j.contains("anchors")) throw InputError("instance: missing field \"anchors\"");
  if (!j.contains("frame")) throw InputError("instance: missing field \"frame\"");
  inst.anchors = detail::parse_vector_list(j["anchors"], inst.dimension, "anchors");
  if (inst.anchors.empty()) throw InputError("instance: at least one anchor is required");
  if (static_cast<Index>(inst.anchors.size()) >= inst.dimension)
    throw InputError("instance: need fewer anchors than the dimension");
  inst.frame = detail::parse_vector_list(j["frame"], inst.dimension, "frame");
  if (inst.frame.empty()) throw InputError("instance: frame must contain at least one vector");
  if (j.contains("second_frame") && !j["second_frame"].is_null()) {
    inst.second_frame = detail::parse_vector_list(j["second_frame"], inst.dimension, "second_frame");
    if (inst.second_frame->empty()) throw InputError("instance: second_frame is empty");
  }
  if (j.contains("operators")) {
    if (!j["operators"].is_object()) throw InputError("instance: \"operators\" must be an object");
    for (const auto& [name, value] : j["operators"].items())
      inst.operators[name] = detail::parse_matrix(value, inst.rank(), "operators." + name);
  }
  if (j.contains("vectors")) {
    if (!j["vectors"].is_object()) throw InputError("instance: \"vectors\" must be an object");
    for (const auto& [name, value] : j["vectors"].items())
      inst.vectors[name] = detail::parse_vector(value, inst.dimension, "vectors." + name);
  }
  return inst;
}

inline InstanceFile parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance: malformed JSON: ") + e.what());
  }
  return parse_instance(j);
}

inline InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("instance: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

inline std::string serialize_instance(const InstanceFile& inst) {
  std::ostringstream os;
  os << "{\n  \"dimension\": " << inst.dimension << ",\n  \"anchors\": ";
  detail::write_vector_list(os, inst.anchors, "  ");
  os << ",\n  \"frame\": ";
  detail::write_vector_list(os, inst.frame, "  ");
  if (inst.second_frame) {
    os << ",\n  \"second_frame\": ";
    detail::write_vector_list(os, *inst.second_frame, "  ");
  }
  if (!inst.operators.empty()) {
    os << ",\n  \"operators\": {";
    bool first = true;
    for (const auto& [name, m] : inst.operators) {
      os << (first ? "\n" : ",\n") << "    " << nlohmann::json(name).dump() << ": [";
      for (Index r = 0; r < m.rows(); ++r) {
        if (r) os << ", ";
        detail::write_vector(os, m.row(r).transpose());
      }
      os << ']';
      first = false;
    }
    os << "\n  }";
  }
  if (!inst.vectors.empty()) {
    os << ",\n  \"vectors\": {";
    bool first = true;
    for (const auto& [name, v] : inst.vectors) {
      os << (first ? "\n" : ",\n") << "    " << nlohmann::json(name).dump() << ": ";
      detail::write_vector(os, v);
      first = false;
    }
    os << "\n  }";
  }
  os << "\n}\n";
  return os.str();
}

// An instance with its induced space and frames constructed.
struct ResolvedInstance {
  InstanceFile file;
  std::shared_ptr<const InducedSpace> space;
  FrameSystem frame;
  std::optional<FrameSystem> second_frame;

  const Matrix& require_operator(const std::string& name) const {
    auto it = file.operators.find(name);
    if (it == file.operators.end()) throw InputError("instance: no operator named \"" + name + "\"");
    return it->second;
  }

  const AmbientVector& require_vector(const std::string& name) const {
    auto it = file.vectors.find(name);
    if (it == file.vectors.end()) throw InputError("instance: no vector named \"" + name + "\"");
    return it->second;
  }

  const FrameSystem& require_second_frame() const {
    if (!second_frame) throw InputError("instance: no \"second_frame\" given");
    return *second_frame;
  }
};

inline ResolvedInstance resolve_instance(InstanceFile file, double rank_tol = kRankTolerance) {
  auto space = std::make_shared<const InducedSpace>(build_induced_space(AnchorSet(file.anchors), rank_tol));
  FrameSystem frame(space, file.frame);
  std::optional<FrameSystem> second;
  if (file.second_frame) {
    if (file.second_frame->size() != file.frame.size())
      throw InputError("instance: second_frame must have as many vectors as frame");
    second.emplace(space, *file.second_frame);
  }
  return {std::move(file), std::move(space), std::move(frame), std::move(second)};
}

}  // namespace nframe
