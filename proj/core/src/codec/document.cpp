// Copyright 2026 The CloudNet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cloudnet/codec/document.hpp"

#include <charconv>
#include <cstdio>
#include <set>

#include "cloudnet/common/errors.hpp"
#include "cloudnet/common/util.hpp"
#include "cloudnet/rdl/validate.hpp"

namespace cloudnet::codec {

namespace {

constexpr char kHeaderTag[] = "cloudnet-graph/1";

// Characters with structural meaning anywhere in the format. Escaped as
// \xHH (newline as \n) so raw splitting on separators is always safe.
bool needs_escape(char c) {
  switch (c) {
    case '\\': case ';': case '=': case ',': case ':': case '+': case '~':
    case '\n': case '\r':
      return true;
    default:
      return false;
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

[[noreturn]] void malformed(const std::string& detail) {
  throw MalformedDocument(detail);
}

// ---- field assembly -------------------------------------------------------

class RecordWriter {
 public:
  explicit RecordWriter(std::string record_class) : line_(std::move(record_class)) {}

  RecordWriter& field(const std::string& key, const std::string& escaped_value) {
    line_ += ';';
    line_ += key;
    line_ += '=';
    line_ += escaped_value;
    return *this;
  }

  const std::string& str() const { return line_; }

 private:
  std::string line_;
};

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string resource_atom(const rdl::Resource& r) {
  return escape_atom(r.kind) + ':' + escape_atom(format_amount(r.amount)) + ':' +
         escape_atom(r.unit) + ':' + (r.shareable ? "1" : "0");
}

std::string feature_atom(const rdl::Feature& f) {
  return escape_atom(f.key) + ':' + escape_atom(f.value) + ':' + escape_atom(f.group);
}

std::string segment_atom(const rdl::MappingSegment& seg) {
  std::string out = escape_atom(seg.ul_id);
  bool first = true;
  for (const auto& [kind, amount] : seg.allocations) {
    out += first ? ':' : '+';
    first = false;
    out += escape_atom(kind) + '~' + escape_atom(format_amount(amount));
  }
  return out;
}

// ---- parsing helpers ------------------------------------------------------

struct Field {
  std::string key;
  std::string value;  // still escaped
};

std::vector<Field> parse_fields(const std::vector<std::string>& raw,
                                std::size_t first_index, const std::string& where) {
  std::vector<Field> fields;
  for (std::size_t i = first_index; i < raw.size(); ++i) {
    auto eq = raw[i].find('=');
    if (eq == std::string::npos) malformed(where + ": field without '='");
    fields.push_back({raw[i].substr(0, eq), raw[i].substr(eq + 1)});
  }
  return fields;
}

const std::string* find_field(const std::vector<Field>& fields, const std::string& key) {
  for (const auto& f : fields)
    if (f.key == key) return &f.value;
  return nullptr;
}

std::string require_field(const std::vector<Field>& fields, const std::string& key,
                          const std::string& where) {
  const std::string* v = find_field(fields, key);
  if (v == nullptr) malformed(where + ": missing field '" + key + "'");
  return unescape_atom(*v);
}

double parse_amount_field(const std::string& text, const std::string& where) {
  try {
    return parse_amount(text);
  } catch (const std::invalid_argument&) {
    malformed(where + ": bad amount '" + text + "'");
  }
}

rdl::NetworkElement parse_ne(const std::vector<Field>& fields) {
  rdl::NetworkElement ne;
  ne.id = require_field(fields, "id", "NE");
  try {
    ne.type = rdl::parse_type_path(require_field(fields, "type", "NE"));
  } catch (const MalformedPath& e) {
    malformed(std::string("NE: ") + e.what());
  }
  if (const std::string* res = find_field(fields, "res"))
    for (const auto& atom : split(*res, ',')) {
      auto parts = split(atom, ':');
      if (parts.size() != 4) malformed("NE " + ne.id + ": bad resource atom");
      rdl::Resource r;
      r.kind = unescape_atom(parts[0]);
      r.amount = parse_amount_field(unescape_atom(parts[1]), "NE " + ne.id);
      r.unit = unescape_atom(parts[2]);
      if (parts[3] != "0" && parts[3] != "1")
        malformed("NE " + ne.id + ": bad shareable flag");
      r.shareable = parts[3] == "1";
      ne.resources.push_back(std::move(r));
    }
  if (const std::string* feat = find_field(fields, "feat"))
    for (const auto& atom : split(*feat, ',')) {
      auto parts = split(atom, ':');
      if (parts.size() != 3) malformed("NE " + ne.id + ": bad feature atom");
      ne.features.push_back({unescape_atom(parts[0]), unescape_atom(parts[1]),
                             unescape_atom(parts[2])});
    }
  if (const std::string* ifs = find_field(fields, "if"))
    for (const auto& atom : split(*ifs, ','))
      ne.interfaces.push_back(unescape_atom(atom));
  return ne;
}

rdl::NetworkInterface parse_ni(const std::vector<Field>& fields) {
  rdl::NetworkInterface ni;
  ni.id = require_field(fields, "id", "NI");
  ni.owner = require_field(fields, "owner", "NI");
  if (const std::string* peer = find_field(fields, "peer"))
    ni.peer = unescape_atom(*peer);
  return ni;
}

rdl::MappingEntry parse_map(const std::vector<Field>& fields, int* vlan_out) {
  rdl::MappingEntry entry;
  entry.ol_id = require_field(fields, "id", "MAP");
  if (const std::string* segs = find_field(fields, "segs"))
    for (const auto& atom : split(*segs, ',')) {
      auto head = split(atom, ':');
      if (head.empty() || head.size() > 2) malformed("MAP " + entry.ol_id + ": bad segment");
      rdl::MappingSegment seg;
      seg.ul_id = unescape_atom(head[0]);
      if (head.size() == 2)
        for (const auto& alloc : split(head[1], '+')) {
          auto kv = split(alloc, '~');
          if (kv.size() != 2) malformed("MAP " + entry.ol_id + ": bad allocation");
          seg.allocations[unescape_atom(kv[0])] =
              parse_amount_field(unescape_atom(kv[1]), "MAP " + entry.ol_id);
        }
      entry.segments.push_back(std::move(seg));
    }
  *vlan_out = -1;
  if (const std::string* vlan = find_field(fields, "vlan")) {
    const std::string text = unescape_atom(*vlan);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      malformed("MAP " + entry.ol_id + ": bad vlan");
    *vlan_out = value;
  }
  return entry;
}

}  // namespace

std::string escape_atom(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (!needs_escape(c)) {
      out += c;
      continue;
    }
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    char buf[5];
    std::snprintf(buf, sizeof(buf), "\\x%02x", static_cast<unsigned char>(c));
    out += buf;
  }
  return out;
}

std::string unescape_atom(const std::string& escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] != '\\') {
      out += escaped[i];
      continue;
    }
    if (i + 1 < escaped.size() && escaped[i + 1] == 'n') {
      out += '\n';
      i += 1;
      continue;
    }
    if (i + 3 < escaped.size() && escaped[i + 1] == 'x') {
      int hi = hex_value(escaped[i + 2]);
      int lo = hex_value(escaped[i + 3]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 3;
        continue;
      }
    }
    malformed("bad escape in '" + escaped + "'");
  }
  return out;
}

std::string serialize(const rdl::TopologyGraph& g) {
  const rdl::ValidationReport report = rdl::validate_graph(g);
  if (!report.ok()) throw InvalidGraph(report.summary());

  std::string out;
  out += kHeaderTag;
  out += ";id=" + escape_atom(g.id());
  out += ";layer=" + to_string(g.layer());
  out += '\n';

  // std::map iteration gives the canonical (record class, id) order: all NE
  // records sorted by id, then all NI records sorted by id.
  for (const auto& [id, ne] : g.elements()) {
    RecordWriter rec("NE");
    rec.field("id", escape_atom(id));
    rec.field("type", escape_atom(ne.type.to_string()));
    if (!ne.resources.empty()) {
      std::vector<std::string> atoms;
      for (const auto& r : ne.resources) atoms.push_back(resource_atom(r));
      rec.field("res", join(atoms, ','));
    }
    if (!ne.features.empty()) {
      std::vector<std::string> atoms;
      for (const auto& f : ne.features) atoms.push_back(feature_atom(f));
      rec.field("feat", join(atoms, ','));
    }
    if (!ne.interfaces.empty()) {
      std::vector<std::string> atoms;
      for (const auto& i : ne.interfaces) atoms.push_back(escape_atom(i));
      rec.field("if", join(atoms, ','));
    }
    out += rec.str();
    out += '\n';
  }
  for (const auto& [id, ni] : g.interfaces()) {
    RecordWriter rec("NI");
    rec.field("id", escape_atom(id));
    rec.field("owner", escape_atom(ni.owner));
    if (ni.peer) rec.field("peer", escape_atom(*ni.peer));
    out += rec.str();
    out += '\n';
  }
  return out;
}

std::string serialize(const rdl::MappingLayer& ml) {
  rdl::MappingLayer sorted = ml;
  sorted.sort_entries();

  std::string out;
  out += kHeaderTag;
  out += ";id=" + escape_atom(sorted.request_graph_id);
  out += ";layer=ML\n";
  for (const auto& entry : sorted.entries) {
    RecordWriter rec("MAP");
    rec.field("id", escape_atom(entry.ol_id));
    if (!entry.segments.empty()) {
      std::vector<std::string> atoms;
      for (const auto& seg : entry.segments) atoms.push_back(segment_atom(seg));
      rec.field("segs", join(atoms, ','));
    }
    auto vlan = sorted.vlan_by_link.find(entry.ol_id);
    if (vlan != sorted.vlan_by_link.end())
      rec.field("vlan", std::to_string(vlan->second));
    out += rec.str();
    out += '\n';
  }
  return out;
}

Decoded deserialize(const std::string& bytes) {
  std::vector<std::string> lines = split(bytes, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) malformed("empty document");

  const auto header = split(lines[0], ';');
  if (header.empty() || header[0] != kHeaderTag)
    malformed("bad header tag");
  const auto header_fields = parse_fields(header, 1, "header");
  const std::string doc_id = require_field(header_fields, "id", "header");
  const rdl::Layer layer = rdl::parse_layer(require_field(header_fields, "layer", "header"));

  if (layer == rdl::Layer::ML) {
    rdl::MappingLayer ml;
    ml.request_graph_id = doc_id;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto raw = split(lines[i], ';');
      if (raw.empty() || raw[0] != "MAP")
        malformed("line " + std::to_string(i + 1) + ": unknown record class in ML document");
      int vlan = -1;
      rdl::MappingEntry entry = parse_map(parse_fields(raw, 1, "MAP"), &vlan);
      if (!seen.insert(entry.ol_id).second) malformed("duplicate MAP id " + entry.ol_id);
      if (vlan >= 0) ml.vlan_by_link[entry.ol_id] = vlan;
      ml.entries.push_back(std::move(entry));
    }
    ml.sort_entries();
    return ml;
  }

  rdl::TopologyGraph g(doc_id, layer);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto raw = split(lines[i], ';');
    if (raw.empty()) malformed("empty record line");
    const std::string& record_class = raw[0];
    try {
      if (record_class == "NE") {
        g.add(parse_ne(parse_fields(raw, 1, "NE")));
      } else if (record_class == "NI") {
        g.add(parse_ni(parse_fields(raw, 1, "NI")));
      } else {
        malformed("line " + std::to_string(i + 1) + ": unknown record class '" +
                  record_class + "'");
      }
    } catch (const InvalidGraph& e) {
      malformed(e.what());  // duplicate ids surface as document errors
    }
  }

  // Referential integrity; deeper semantics stay with validate_graph.
  for (const auto& [id, ne] : g.elements())
    for (const auto& ni_id : ne.interfaces)
      if (g.interface(ni_id) == nullptr)
        malformed("NE " + id + " references unknown interface " + ni_id);
  for (const auto& [id, ni] : g.interfaces()) {
    if (g.element(ni.owner) == nullptr)
      malformed("NI " + id + " owned by unknown element " + ni.owner);
    if (ni.peer && g.interface(*ni.peer) == nullptr)
      malformed("NI " + id + " peers with unknown interface " + *ni.peer);
  }
  return g;
}

rdl::TopologyGraph deserialize_graph(const std::string& bytes) {
  Decoded doc = deserialize(bytes);
  if (auto* g = std::get_if<rdl::TopologyGraph>(&doc)) return std::move(*g);
  throw MalformedDocument("expected a topology graph document");
}

rdl::MappingLayer deserialize_mapping(const std::string& bytes) {
  Decoded doc = deserialize(bytes);
  if (auto* ml = std::get_if<rdl::MappingLayer>(&doc)) return std::move(*ml);
  throw MalformedDocument("expected a mapping document");
}

}  // namespace cloudnet::codec
