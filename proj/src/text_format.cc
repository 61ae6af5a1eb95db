/*
 * Copyright (c) 2026, The cwall Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#include "cwall/text_format.hh"

#include <fstream>
#include <map>
#include <sstream>

namespace cwall {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

// Splits "name : value"; both sides must be single tokens.
std::pair<std::string, std::string> binding(std::string_view s,
                                            std::size_t line) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError(line, "expected '<name> : <name>'");
  }
  auto lhs = split_ws(s.substr(0, colon));
  auto rhs = split_ws(s.substr(colon + 1));
  if (lhs.size() != 1 || rhs.size() != 1) {
    throw ParseError(line, "expected '<name> : <name>'");
  }
  return {lhs[0], rhs[0]};
}

SubjectId subject_at(const Policy& policy, const std::string& name,
                     std::size_t line) {
  if (auto s = policy.find_subject(name)) return *s;
  throw ParseError(line, "unknown subject '" + name + "'");
}

ObjectId object_at(const Policy& policy, const std::string& name,
                   std::size_t line) {
  if (auto o = policy.find_object(name)) return *o;
  throw ParseError(line, "unknown object '" + name + "'");
}

// Parses "{(s,o),(s,o)}" into m.
void parse_matrix(const Policy& policy, std::string_view text,
                  AccessMatrix& m, std::size_t line) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw ParseError(line, "expected '{...}' access set");
  }
  std::string body;
  for (char c : text.substr(1, text.size() - 2)) {
    if (c != ' ' && c != '\t') body += c;
  }
  std::size_t pos = 0;
  while (pos < body.size()) {
    if (body[pos] != '(') throw ParseError(line, "expected '(' in access set");
    const auto close = body.find(')', pos);
    if (close == std::string::npos) {
      throw ParseError(line, "unterminated pair in access set");
    }
    const auto inner = body.substr(pos + 1, close - pos - 1);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) {
      throw ParseError(line, "expected '(subject,object)'");
    }
    m.insert(subject_at(policy, inner.substr(0, comma), line),
             object_at(policy, inner.substr(comma + 1), line));
    pos = close + 1;
    if (pos < body.size()) {
      if (body[pos] != ',') throw ParseError(line, "expected ',' between pairs");
      ++pos;
    }
  }
}

State parse_state_at(const Policy& policy, std::string_view text,
                     std::size_t line) {
  text = trim(text);
  const auto w = text.find("W=");
  if (text.substr(0, 2) != "N=" || w == std::string_view::npos) {
    throw ParseError(line, "expected 'N={...} W={...}'");
  }
  State st = State::initial(policy);
  parse_matrix(policy, text.substr(2, w - 2), st.read, line);
  parse_matrix(policy, text.substr(w + 2), st.write, line);
  return st;
}

std::vector<Access> parse_access_list(const Policy& policy,
                                      std::string_view text,
                                      std::size_t line) {
  std::vector<Access> out;
  text = trim(text);
  if (text.empty() || text == "none") return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto toks = split_ws(text.substr(pos, comma - pos));
    if (toks.size() != 2) {
      throw ParseError(line, "expected '<subject> <object>' in revocation list");
    }
    out.push_back({subject_at(policy, toks[0], line),
                   object_at(policy, toks[1], line)});
    pos = comma + 1;
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(line ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

RawPolicy parse_policy(std::string_view text) {
  RawPolicy raw;
  enum class Section { kNone, kCoics, kDatasets, kObjects, kSubjects };
  Section section = Section::kNone;
  std::optional<std::string> sanitized_coic;
  std::map<std::string, std::string> object_dataset;
  std::vector<std::pair<std::string, std::size_t>> object_order;
  std::map<std::string, std::string> dataset_coic;
  std::map<std::string, bool> coic_seen;
  std::map<std::string, bool> subject_seen;

  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t ln = i + 1;
    const auto line = trim(strip_comment(lines[i]));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[coics]") {
        section = Section::kCoics;
      } else if (line == "[datasets]") {
        section = Section::kDatasets;
      } else if (line == "[objects]") {
        section = Section::kObjects;
      } else if (line == "[subjects]") {
        section = Section::kSubjects;
      } else {
        throw ParseError(ln, "unknown section '" + std::string(line) + "'");
      }
      continue;
    }
    switch (section) {
      case Section::kNone:
        throw ParseError(ln, "entry outside of any section");
      case Section::kCoics: {
        auto toks = split_ws(line);
        if (toks.size() > 2 || (toks.size() == 2 && toks[1] != "sanitized")) {
          throw ParseError(ln, "expected '<coic>' or '<coic> sanitized'");
        }
        if (coic_seen[toks[0]]) {
          throw ParseError(ln, "duplicate CoIC '" + toks[0] + "'");
        }
        coic_seen[toks[0]] = true;
        if (toks.size() == 2) {
          if (sanitized_coic) {
            throw ParseError(ln, "more than one sanitized CoIC");
          }
          sanitized_coic = toks[0];
        } else {
          raw.coics.push_back(toks[0]);
        }
        break;
      }
      case Section::kDatasets: {
        auto [d, c] = binding(line, ln);
        const bool sanitized =
            c == (sanitized_coic ? *sanitized_coic : raw.sanitized_coic);
        if (!coic_seen[c] && !sanitized) {
          throw ParseError(ln, "unknown CoIC '" + c + "'");
        }
        raw.dataset_bindings.emplace_back(d, c);
        dataset_coic.emplace(d, c);
        break;
      }
      case Section::kObjects: {
        auto [o, d] = binding(line, ln);
        if (object_dataset.contains(o)) {
          throw ParseError(ln, "duplicate object '" + o + "'");
        }
        object_dataset.emplace(o, d);
        object_order.emplace_back(o, ln);
        break;
      }
      case Section::kSubjects: {
        auto toks = split_ws(line);
        if (toks.size() != 1) throw ParseError(ln, "expected one subject name");
        if (subject_seen[toks[0]]) {
          throw ParseError(ln, "duplicate subject '" + toks[0] + "'");
        }
        subject_seen[toks[0]] = true;
        raw.subjects.push_back(toks[0]);
        break;
      }
    }
  }

  if (sanitized_coic) raw.sanitized_coic = *sanitized_coic;
  for (const auto& [d, c] : raw.dataset_bindings) {
    if (c == raw.sanitized_coic) {
      raw.sanitized_dataset = d;
      break;
    }
  }
  for (const auto& [o, ln] : object_order) {
    const auto& d = object_dataset.at(o);
    RawObject obj{o, std::nullopt};
    if (d == raw.sanitized_dataset) {
      obj.label = RawLabel{raw.sanitized_coic, d};
    } else if (auto it = dataset_coic.find(d); it != dataset_coic.end()) {
      obj.label = RawLabel{it->second, d};
    } else {
      throw ParseError(ln, "unknown dataset '" + d + "'");
    }
    raw.objects.push_back(std::move(obj));
  }
  return raw;
}

Policy load_policy_text(std::string_view text) {
  return validate_policy(parse_policy(text));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Policy load_policy_file(const std::string& path) {
  return load_policy_text(read_file(path));
}

std::string render_policy(const Policy& policy) {
  std::ostringstream os;
  os << "[coics]\n";
  for (std::uint32_t c = 0; c < policy.coic_count(); ++c) {
    os << policy.coic_name(CoicId{c});
    if (CoicId{c} == policy.sanitized_coic()) os << " sanitized";
    os << '\n';
  }
  os << "[datasets]\n";
  for (std::uint32_t d = 0; d < policy.dataset_count(); ++d) {
    os << policy.dataset_name(DatasetId{d}) << " : "
       << policy.coic_name(policy.coic_of(DatasetId{d})) << '\n';
  }
  os << "[objects]\n";
  for (std::uint32_t o = 0; o < policy.object_count(); ++o) {
    os << policy.object_name(ObjectId{o}) << " : "
       << policy.dataset_name(policy.ds(ObjectId{o})) << '\n';
  }
  os << "[subjects]\n";
  for (std::uint32_t s = 0; s < policy.subject_count(); ++s) {
    os << policy.subject_name(SubjectId{s}) << '\n';
  }
  return os.str();
}

State parse_state(const Policy& policy, std::string_view text) {
  return parse_state_at(policy, text, 0);
}

TraceEntry parse_trace_line(const Policy& policy, std::string_view text,
                            std::size_t line) {
  TraceEntry e;
  e.line = line;
  text = trim(strip_comment(text));
  const auto bang = text.find('!');
  const auto head = split_ws(text.substr(0, bang));
  if (head.size() != 3) {
    throw ParseError(line, "expected '<read|write|rw> <subject> <object>'");
  }
  if (head[0] == "read") {
    e.request.mode = Mode::kRead;
  } else if (head[0] == "write") {
    e.request.mode = Mode::kWriteOnly;
  } else if (head[0] == "rw") {
    e.request.mode = Mode::kReadWrite;
  } else {
    throw ParseError(line, "unknown action '" + head[0] + "'");
  }
  e.request.subject = subject_at(policy, head[1], line);
  e.request.object = object_at(policy, head[2], line);

  std::size_t pos = bang;
  while (pos != std::string_view::npos) {
    auto next = text.find('!', pos + 1);
    const auto suffix = trim(text.substr(
        pos + 1, next == std::string_view::npos ? std::string_view::npos
                                                : next - pos - 1));
    const auto sp = suffix.find_first_of(" \t");
    const auto word = suffix.substr(0, sp);
    const auto rest =
        sp == std::string_view::npos ? std::string_view{} : suffix.substr(sp);
    if (word == "deny") {
      if (!trim(rest).empty()) throw ParseError(line, "'!deny' takes no argument");
      e.expect_deny = true;
    } else if (word == "revokes") {
      e.expect_revokes = parse_access_list(policy, rest, line);
      e.request.consent_to_revoke = true;
    } else if (word == "consent") {
      e.request.consent_to_revoke = true;
    } else if (word == "rule") {
      auto toks = split_ws(rest);
      if (toks.size() != 1) throw ParseError(line, "expected '!rule <name>'");
      e.rule = parse_rule(toks[0]);
      if (!e.rule) throw ParseError(line, "unknown rule '" + toks[0] + "'");
    } else {
      throw ParseError(line, "unknown suffix '!" + std::string(word) + "'");
    }
    pos = next;
  }
  if (e.expect_deny && e.expect_revokes) {
    throw ParseError(line, "'!deny' and '!revokes' are exclusive");
  }
  return e;
}

std::vector<TraceEntry> parse_trace(const Policy& policy,
                                    std::string_view text) {
  std::vector<TraceEntry> out;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t ln = i + 1;
    const auto line = trim(strip_comment(lines[i]));
    if (line.empty()) continue;
    const auto sp = line.find_first_of(" \t");
    const auto word = line.substr(0, sp);
    const auto rest =
        sp == std::string_view::npos ? std::string_view{} : line.substr(sp);
    if (word == "start" || word == "expect-state") {
      TraceEntry e;
      e.kind = word == "start" ? TraceEntry::Kind::kStart
                               : TraceEntry::Kind::kExpectState;
      e.line = ln;
      e.state = parse_state_at(policy, rest, ln);
      out.push_back(std::move(e));
    } else if (word == "expect-violation") {
      TraceEntry e;
      e.kind = TraceEntry::Kind::kExpectViolation;
      e.line = ln;
      auto toks = split_ws(rest);
      std::optional<InvariantName> inv;
      if (toks.size() == 1) inv = parse_invariant(toks[0]);
      if (!inv) throw ParseError(ln, "expected 'expect-violation <invariant>'");
      e.invariant = *inv;
      out.push_back(std::move(e));
    } else {
      out.push_back(parse_trace_line(policy, line, ln));
    }
  }
  return out;
}

std::vector<TraceEntry> load_trace_file(const Policy& policy,
                                        const std::string& path) {
  return parse_trace(policy, read_file(path));
}

}  // namespace cwall
