#pragma once

// Scenario files: a line-oriented format declaring services, threads (with
// attributes, instruction sequences or goal graphs), vector nesting, the
// policy block, and an optional meta-action script. parse_scenario and
// render_scenario form a canonicalizing pair: render output re-parses to an
// identical scenario.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pmth/attributes.hpp"
#include "pmth/engine.hpp"
#include "pmth/errors.hpp"
#include "pmth/goal_graph.hpp"
#include "pmth/htva.hpp"
#include "pmth/instruction.hpp"
#include "pmth/policy.hpp"
#include "pmth/service.hpp"
#include "pmth/switch_protocol.hpp"

namespace pmth {

struct Scenario {
  ServiceMap services;
  Htva htva;
  ExecutiveConfig executive;  // distributed unless the policy block names one
  Policy policy;
  ProtocolMode mode = ProtocolMode::sip;
  std::vector<MetaAction> meta;
  std::int64_t max_steps = 10000;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(std::string(s.substr(i, j - i)));
    i = j;
  }
  return out;
}

[[noreturn]] inline void parse_fail(int line, const std::string& msg) {
  fail(Errc::parse_error, "line " + std::to_string(line) + ": " + msg);
}

inline long long to_int(const std::string& tok, int line, const std::string& what) {
  if (tok.empty()) parse_fail(line, what + " is empty");
  std::size_t i = tok[0] == '-' ? 1 : 0;
  if (i == tok.size()) parse_fail(line, "bad " + what + " '" + tok + "'");
  for (; i < tok.size(); ++i)
    if (tok[i] < '0' || tok[i] > '9') parse_fail(line, "bad " + what + " '" + tok + "'");
  try {
    return std::stoll(tok);
  } catch (const std::exception&) {
    parse_fail(line, what + " '" + tok + "' out of range");
  }
}

struct ThreadDecl {
  std::string name;
  int line = 0;
  std::optional<std::vector<Instruction>> iseq;
  GoalGraph goals;
  bool has_goals = false;
  AttributeSet attrs;
  bool workload_declared = false;
};

struct VectorDecl {
  std::string name;
  int line = 0;
  std::vector<std::string> members;
};

inline MetaAction parse_meta_line(const std::vector<std::string>& tok, int line) {
  MetaAction m;
  const std::string& verb = tok[0];
  auto need = [&](std::size_t n) {
    if (tok.size() != n)
      parse_fail(line, "'" + verb + "' takes " + std::to_string(n - 1) + " argument(s)");
  };
  if (verb == "c-switch") {
    need(3);
    m.kind = MetaAction::Kind::c_switch;
    m.a = tok[1];
    m.b = tok[2];
  } else if (verb == "a-switch") {
    if (tok.size() != 2 && tok.size() != 3)
      parse_fail(line, "'a-switch' takes a target and an optional motive");
    m.kind = MetaAction::Kind::a_switch;
    m.a = tok[1];
    if (tok.size() == 3) m.motive = motive_from_name(tok[2]);
  } else if (verb == "pseudo-switch") {
    need(3);
    m.kind = MetaAction::Kind::pseudo_switch;
    m.a = tok[1];  // host
    m.b = tok[2];  // guest
  } else if (verb == "pseudo-back") {
    need(3);
    m.kind = MetaAction::Kind::pseudo_back;
    m.b = tok[1];  // guest
    m.a = tok[2];  // host
  } else if (verb == "step") {
    if (tok.size() > 2) parse_fail(line, "'step' takes an optional count");
    m.kind = MetaAction::Kind::step;
    m.count = tok.size() == 2 ? static_cast<int>(to_int(tok[1], line, "step count")) : 1;
    if (m.count < 0) parse_fail(line, "negative step count");
  } else if (verb == "waive") {
    need(1);
    m.kind = MetaAction::Kind::waiver;
  } else if (verb == "shrink" || verb == "grow") {
    need(4);
    m.kind = verb == "shrink" ? MetaAction::Kind::shrink : MetaAction::Kind::grow;
    m.a = tok[1];
    m.delta = static_cast<int>(to_int(tok[2], line, "amount"));
    m.component = workload_component_from_name(tok[3]);
  } else if (verb == "rebalance") {
    if (tok.size() < 5 || tok.size() % 2 == 0)
      parse_fail(line, "'rebalance' takes FROM COMPONENT followed by THREAD AMOUNT pairs");
    m.kind = MetaAction::Kind::rebalance;
    m.a = tok[1];
    m.component = workload_component_from_name(tok[2]);
    for (std::size_t i = 3; i + 1 < tok.size(); i += 2)
      m.targets.emplace_back(tok[i], static_cast<int>(to_int(tok[i + 1], line, "amount")));
  } else {
    parse_fail(line, "unknown meta-action '" + verb + "'");
  }
  return m;
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view text) {
  using detail::parse_fail;
  Scenario sc;
  std::vector<std::pair<std::string, std::vector<Reply>>> services;
  std::vector<detail::ThreadDecl> threads;
  std::vector<detail::VectorDecl> vectors;

  enum class Section { none, service, thread, vector, policy, meta };
  Section section = Section::none;
  std::size_t current = 0;  // index into the active declaration list
  std::set<std::string> section_names;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line = detail::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') {
      if (pos > text.size()) break;
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "unterminated section header");
      auto inner = detail::split_ws(std::string_view(line).substr(1, line.size() - 2));
      if (inner.empty()) parse_fail(line_no, "empty section header");
      const std::string& kind = inner[0];
      auto named = [&](const char* what) -> std::string {
        if (inner.size() != 2) parse_fail(line_no, std::string("[") + what + "] needs a name");
        if (!is_identifier(inner[1]))
          parse_fail(line_no, "bad " + std::string(what) + " name '" + inner[1] + "'");
        if (!section_names.insert(inner[1]).second)
          fail(Errc::duplicate_name, "line " + std::to_string(line_no) + ": '" + inner[1] + "'");
        return inner[1];
      };
      if (kind == "service") {
        services.push_back({named("service"), {}});
        section = Section::service;
        current = services.size() - 1;
      } else if (kind == "thread") {
        detail::ThreadDecl td;
        td.name = named("thread");
        td.line = line_no;
        threads.push_back(std::move(td));
        section = Section::thread;
        current = threads.size() - 1;
      } else if (kind == "vector") {
        detail::VectorDecl vd;
        vd.name = named("vector");
        vd.line = line_no;
        vectors.push_back(std::move(vd));
        section = Section::vector;
        current = vectors.size() - 1;
      } else if (kind == "policy") {
        if (inner.size() != 1) parse_fail(line_no, "[policy] takes no name");
        section = Section::policy;
      } else if (kind == "meta") {
        if (inner.size() != 1) parse_fail(line_no, "[meta] takes no name");
        section = Section::meta;
      } else {
        parse_fail(line_no, "unknown section '" + kind + "'");
      }
      if (pos > text.size()) break;
      continue;
    }

    if (section == Section::none)
      parse_fail(line_no, "content before the first section header");

    if (section == Section::meta) {
      sc.meta.push_back(detail::parse_meta_line(detail::split_ws(line), line_no));
      if (pos > text.size()) break;
      continue;
    }

    // dep lines are bare; everything else in key-value sections is `key = value`.
    auto toks = detail::split_ws(line);
    if (section == Section::thread && toks.size() >= 1 && toks[0] == "dep") {
      if (toks.size() != 3) parse_fail(line_no, "'dep' takes two goal names");
      threads[current].goals.deps.insert({toks[1], toks[2]});
      threads[current].has_goals = true;
      if (pos > text.size()) break;
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos)
      parse_fail(line_no, "expected 'key = value' (column " +
                              std::to_string(line.size() + 1) + ")");
    std::string key = detail::trim(std::string_view(line).substr(0, eq));
    std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    auto key_toks = detail::split_ws(key);
    auto val_toks = detail::split_ws(value);
    if (key_toks.empty()) parse_fail(line_no, "missing key");

    auto want_ints = [&](std::size_t n, const char* what) {
      if (val_toks.size() != n)
        parse_fail(line_no, std::string(what) + " needs " + std::to_string(n) + " integers");
      std::vector<int> out;
      for (const auto& t : val_toks)
        out.push_back(static_cast<int>(detail::to_int(t, line_no, what)));
      return out;
    };

    switch (section) {
      case Section::service: {
        if (key != "replies") parse_fail(line_no, "unknown service key '" + key + "'");
        if (val_toks.empty()) parse_fail(line_no, "empty reply pattern");
        for (const auto& t : val_toks) {
          if (t.size() != 1 || (t[0] != 'T' && t[0] != 'F' && t[0] != 'B'))
            parse_fail(line_no, "bad reply token '" + t + "'");
          services[current].second.push_back(static_cast<Reply>(t[0]));
        }
        break;
      }
      case Section::thread: {
        detail::ThreadDecl& td = threads[current];
        if (key == "iseq") {
          if (td.iseq) parse_fail(line_no, "duplicate iseq");
          std::vector<Instruction> instrs;
          for (const auto& t : val_toks) {
            try {
              instrs.push_back(parse_instruction(t));
            } catch (const Error& e) {
              parse_fail(line_no, std::string(e.what()));
            }
          }
          td.iseq = std::move(instrs);
        } else if (key == "workload") {
          auto v = want_ints(4, "workload");
          td.attrs.workload = {v[0], v[1], v[2], v[3]};
          td.workload_declared = true;
        } else if (key == "prominence") {
          auto v = want_ints(2, "prominence");
          td.attrs.prominence_objective = v[0];
          td.attrs.prominence_subjective = v[1];
        } else if (key == "effectiveness") {
          auto v = want_ints(4, "effectiveness");
          td.attrs.effectiveness = {v[0], v[1], v[2], v[3]};
        } else if (key == "mission") {
          td.attrs.mission = value;
        } else if (key == "targets") {
          td.attrs.targets = value;
        } else if (key == "flow" || key == "satisfaction" || key == "identification" ||
                   key == "clarity") {
          int v = want_ints(1, key.c_str())[0];
          if (key == "flow") td.attrs.flow = v;
          if (key == "satisfaction") td.attrs.satisfaction = v;
          if (key == "identification") td.attrs.identification = v;
          if (key == "clarity") td.attrs.clarity = v;
        } else if (key_toks[0] == "attr") {
          if (key_toks.size() != 2) parse_fail(line_no, "'attr' needs one attribute name");
          if (!is_known_other_attribute(key_toks[1]))
            parse_fail(line_no, "unknown attribute '" + key_toks[1] + "'");
          auto v = want_ints(4, "attr");
          td.attrs.other[key_toks[1]] = {v[0], v[1], v[2], v[3]};
        } else if (key_toks[0] == "goal") {
          if (key_toks.size() != 2) parse_fail(line_no, "'goal' needs one goal name");
          if (!is_identifier(key_toks[1]))
            parse_fail(line_no, "bad goal name '" + key_toks[1] + "'");
          if (val_toks.size() != 1) parse_fail(line_no, "'goal' needs one action");
          try {
            td.goals.goals[key_toks[1]] = parse_action(val_toks[0]);
          } catch (const Error& e) {
            parse_fail(line_no, std::string(e.what()));
          }
          td.has_goals = true;
        } else {
          parse_fail(line_no, "unknown thread key '" + key + "'");
        }
        break;
      }
      case Section::vector: {
        if (key != "member") parse_fail(line_no, "unknown vector key '" + key + "'");
        if (val_toks.size() != 1) parse_fail(line_no, "'member' takes one name");
        vectors[current].members.push_back(val_toks[0]);
        break;
      }
      case Section::policy: {
        if (key == "kind") {
          if (val_toks.size() != 1) parse_fail(line_no, "'kind' takes one value");
          try {
            sc.policy.kind = policy_from_name(val_toks[0]);
          } catch (const Error& e) {
            parse_fail(line_no, std::string(e.what()));
          }
        } else if (key == "seed") {
          if (val_toks.size() != 1) parse_fail(line_no, "'seed' takes one value");
          try {
            sc.policy.seed = std::stoull(val_toks[0]);
          } catch (const std::exception&) {
            parse_fail(line_no, "bad seed '" + val_toks[0] + "'");
          }
        } else if (key == "fatigue") {
          int v = want_ints(1, "fatigue")[0];
          if (v < 1) parse_fail(line_no, "fatigue bound must be >= 1");
          sc.policy.fatigue_bound = v;
        } else if (key == "turn-length") {
          int v = want_ints(1, "turn-length")[0];
          if (v < 1) parse_fail(line_no, "turn-length must be >= 1");
          sc.policy.turn_length = v;
        } else if (key == "max-steps") {
          long long v = detail::to_int(value, line_no, "max-steps");
          if (v < 0) parse_fail(line_no, "max-steps must be >= 0");
          sc.max_steps = v;
        } else if (key == "mode") {
          if (value == "sip")
            sc.mode = ProtocolMode::sip;
          else if (value == "manual")
            sc.mode = ProtocolMode::manual;
          else
            parse_fail(line_no, "mode is 'sip' or 'manual'");
        } else if (key == "executive") {
          if (val_toks.size() != 1) parse_fail(line_no, "'executive' takes one value");
          if (value == "distributed") {
            sc.executive.mode = ExecutiveConfig::Mode::distributed;
            sc.executive.thread.clear();
          } else {
            sc.executive.mode = ExecutiveConfig::Mode::dedicated;
            sc.executive.thread = value;
          }
        } else {
          parse_fail(line_no, "unknown policy key '" + key + "'");
        }
        break;
      }
      default:
        parse_fail(line_no, "unexpected content");
    }
    if (pos > text.size()) break;
  }

  // Services.
  for (auto& [name, pattern] : services) {
    Service s;
    s.name = name;
    s.pattern = std::move(pattern);
    if (s.pattern.empty())
      fail(Errc::validation_error, "service '" + name + "' declares no replies");
    sc.services.emplace(name, std::move(s));
  }

  if (threads.empty()) fail(Errc::validation_error, "scenario declares no threads");

  // Materialize instruction sequences (goal graphs are condensed here).
  std::vector<ThreadInstance> instances;
  for (detail::ThreadDecl& td : threads) {
    if (td.iseq && td.has_goals)
      fail(Errc::validation_error,
           "thread '" + td.name + "' declares both iseq and goals");
    if (!td.iseq && !td.has_goals)
      fail(Errc::validation_error, "thread '" + td.name + "' declares neither iseq nor goals");
    ThreadInstance t;
    t.name = td.name;
    t.attrs = td.attrs;
    if (td.iseq) {
      t.iseq = InstructionSequence{td.name, *td.iseq};
    } else {
      t.iseq = condense(td.goals, td.name);
    }
    instances.push_back(std::move(t));
  }

  // Workload defaulting: an even split when nobody declares one.
  bool any_declared = false;
  for (const detail::ThreadDecl& td : threads) any_declared |= td.workload_declared;
  if (!any_declared) {
    int n = static_cast<int>(instances.size());
    int base = kWorkloadTotalBp / n;
    int extra = kWorkloadTotalBp % n;
    for (int i = 0; i < n; ++i) {
      int share = base + (i < extra ? 1 : 0);
      instances[i].attrs.workload = {share, share, share, share};
    }
  }

  // Assemble the vector structure.
  if (vectors.empty()) {
    for (ThreadInstance& t : instances) {
      HtvNode n;
      n.v = std::move(t);
      sc.htva.top.push_back(std::move(n));
    }
  } else {
    std::map<std::string, const detail::VectorDecl*> vec_by_name;
    for (const detail::VectorDecl& vd : vectors) vec_by_name[vd.name] = &vd;
    std::map<std::string, ThreadInstance*> thr_by_name;
    for (ThreadInstance& t : instances) thr_by_name[t.name] = &t;
    if (!vec_by_name.count("root"))
      fail(Errc::validation_error, "vector structure needs a vector named 'root'");
    std::set<std::string> used;
    std::set<std::string> building;

    auto build = [&](auto&& self, const std::string& name) -> HtvNode {
      if (building.count(name))
        fail(Errc::validation_error, "vector cycle through '" + name + "'");
      if (used.count(name))
        fail(Errc::validation_error, "'" + name + "' is a member of two vectors");
      used.insert(name);
      if (auto ti = thr_by_name.find(name); ti != thr_by_name.end()) {
        HtvNode n;
        n.v = std::move(*ti->second);
        return n;
      }
      auto vi = vec_by_name.find(name);
      if (vi == vec_by_name.end())
        fail(Errc::validation_error, "unknown member '" + name + "'");
      building.insert(name);
      HtvVector v;
      v.name = name;
      if (vi->second->members.empty())
        fail(Errc::validation_error, "vector '" + name + "' has no members");
      for (const std::string& m : vi->second->members) v.children.push_back(self(self, m));
      building.erase(name);
      HtvNode n;
      n.v = std::move(v);
      return n;
    };

    building.insert("root");
    for (const std::string& m : vec_by_name.at("root")->members)
      sc.htva.top.push_back(build(build, m));
    building.erase("root");
    used.insert("root");

    for (const detail::VectorDecl& vd : vectors)
      if (!used.count(vd.name))
        fail(Errc::validation_error, "vector '" + vd.name + "' is not reachable from root");
    for (const detail::ThreadDecl& td : threads)
      if (!used.count(td.name))
        fail(Errc::validation_error, "thread '" + td.name + "' is not placed in any vector");
  }

  if (!sc.meta.empty() && sc.mode != ProtocolMode::manual)
    fail(Errc::validation_error, "a [meta] script requires mode = manual");

  return sc;
}

namespace detail {

inline void render_node(const HtvNode& n, std::string& threads_out,
                        std::vector<std::string>& vector_blocks, std::string& member_lines) {
  if (n.is_leaf()) {
    member_lines += "member = " + n.leaf().name + "\n";
    const ThreadInstance& t = n.leaf();
    const AttributeSet& a = t.attrs;
    threads_out += "[thread " + t.name + "]\n";
    threads_out += "iseq =";
    for (const Instruction& ins : t.iseq.instrs) threads_out += " " + to_string(ins);
    threads_out += "\n";
    threads_out += "workload = " + std::to_string(a.workload.subjective) + " " +
                   std::to_string(a.workload.objective) + " " +
                   std::to_string(a.workload.intended) + " " +
                   std::to_string(a.workload.expected) + "\n";
    threads_out += "prominence = " + std::to_string(a.prominence_objective) + " " +
                   std::to_string(a.prominence_subjective) + "\n";
    threads_out += "effectiveness = " + std::to_string(a.effectiveness.internal) + " " +
                   std::to_string(a.effectiveness.external) + " " +
                   std::to_string(a.effectiveness.intended) + " " +
                   std::to_string(a.effectiveness.expected) + "\n";
    threads_out += "flow = " + std::to_string(a.flow) + "\n";
    threads_out += "satisfaction = " + std::to_string(a.satisfaction) + "\n";
    threads_out += "identification = " + std::to_string(a.identification) + "\n";
    threads_out += "clarity = " + std::to_string(a.clarity) + "\n";
    if (!a.mission.empty()) threads_out += "mission = " + a.mission + "\n";
    if (!a.targets.empty()) threads_out += "targets = " + a.targets + "\n";
    for (const auto& [name, q] : a.other)
      threads_out += "attr " + name + " = " + std::to_string(q.internal) + " " +
                     std::to_string(q.external) + " " + std::to_string(q.intended) + " " +
                     std::to_string(q.expected) + "\n";
    threads_out += "\n";
    return;
  }
  member_lines += "member = " + n.vec().name + "\n";
  std::string block = "[vector " + n.vec().name + "]\n";
  std::string inner_members;
  for (const HtvNode& c : n.vec().children)
    render_node(c, threads_out, vector_blocks, inner_members);
  block += inner_members;
  block += "\n";
  vector_blocks.push_back(std::move(block));
}

inline std::string render_meta(const MetaAction& m) {
  switch (m.kind) {
    case MetaAction::Kind::c_switch:
      return "c-switch " + m.a + " " + m.b;
    case MetaAction::Kind::a_switch:
      return m.motive ? "a-switch " + m.a + " " + motive_name(*m.motive) : "a-switch " + m.a;
    case MetaAction::Kind::pseudo_switch:
      return "pseudo-switch " + m.a + " " + m.b;
    case MetaAction::Kind::pseudo_back:
      return "pseudo-back " + m.b + " " + m.a;
    case MetaAction::Kind::step:
      return m.count == 1 ? "step" : "step " + std::to_string(m.count);
    case MetaAction::Kind::waiver:
      return "waive";
    case MetaAction::Kind::shrink:
      return "shrink " + m.a + " " + std::to_string(m.delta) + " " +
             workload_component_name(m.component);
    case MetaAction::Kind::grow:
      return "grow " + m.a + " " + std::to_string(m.delta) + " " +
             workload_component_name(m.component);
    case MetaAction::Kind::rebalance: {
      std::string out = "rebalance " + m.a + " " + workload_component_name(m.component);
      for (const auto& [name, share] : m.targets)
        out += " " + name + " " + std::to_string(share);
      return out;
    }
  }
  return "";
}

}  // namespace detail

// Canonical echo form: every quantitative key written out, sections in a
// fixed order, goal graphs already condensed into iseq.
inline std::string render_scenario(const Scenario& sc) {
  std::string out;
  for (const auto& [name, svc] : sc.services) {
    out += "[service " + name + "]\n";
    out += "replies =";
    for (Reply r : svc.pattern) out += std::string(" ") + reply_char(r);
    out += "\n\n";
  }

  std::string threads_out;
  std::vector<std::string> vector_blocks;
  std::string root_members;
  bool any_vector = false;
  for (const HtvNode& n : sc.htva.top)
    if (!n.is_leaf()) any_vector = true;
  for (const HtvNode& n : sc.htva.top)
    detail::render_node(n, threads_out, vector_blocks, root_members);
  out += threads_out;
  if (any_vector) {
    out += "[vector root]\n" + root_members + "\n";
    for (const std::string& b : vector_blocks) out += b;
  }

  out += "[policy]\n";
  out += std::string("kind = ") + policy_name(sc.policy.kind) + "\n";
  out += "seed = " + std::to_string(sc.policy.seed) + "\n";
  out += "fatigue = " + std::to_string(sc.policy.fatigue_bound) + "\n";
  out += "turn-length = " + std::to_string(sc.policy.turn_length) + "\n";
  out += "max-steps = " + std::to_string(sc.max_steps) + "\n";
  out += std::string("mode = ") + (sc.mode == ProtocolMode::sip ? "sip" : "manual") + "\n";
  out += "executive = ";
  out += sc.executive.mode == ExecutiveConfig::Mode::distributed ? "distributed"
                                                                 : sc.executive.thread;
  out += "\n";

  if (!sc.meta.empty()) {
    out += "\n[meta]\n";
    for (const MetaAction& m : sc.meta) out += detail::render_meta(m) + "\n";
  }
  return out;
}

inline EngineState make_engine_state(const Scenario& sc) {
  return make_engine_state(sc.htva, sc.executive, sc.services, sc.mode);
}

}  // namespace pmth
