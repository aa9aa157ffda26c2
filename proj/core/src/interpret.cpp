#include "matpg/interpret.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <memory>

#include "matpg/text.hpp"

namespace matpg {

PrunedAgent prune(const Root& root, const VertexStore& store) {
  PrunedAgent agent;
  agent.kind = root.kind;

  std::map<VertexId, std::size_t> team_index;
  std::map<VertexId, std::size_t> action_index;
  auto note_action_vertex = [&](VertexId id) {
    if (action_index.emplace(id, agent.action_vertices.size()).second) {
      agent.action_vertices.push_back(id);
    }
  };

  if (root.kind == AgentKind::Matpg) {
    std::deque<VertexId> queue{root.vertex};
    team_index.emplace(root.vertex, 0);
    agent.teams.push_back(root.vertex);
    while (!queue.empty()) {
      const VertexId id = queue.front();
      queue.pop_front();
      for (const TeamEdge& edge : store.team(id).edges) {
        if (store.is_team(edge.destination)) {
          if (team_index.emplace(edge.destination, agent.teams.size()).second) {
            agent.teams.push_back(edge.destination);
            queue.push_back(edge.destination);
          }
        } else {
          note_action_vertex(edge.destination);
        }
      }
    }
  } else {
    note_action_vertex(root.vertex);
  }

  for (std::size_t t = 0; t < agent.teams.size(); ++t) {
    for (const TeamEdge& edge : store.team(agent.teams[t]).edges) {
      PrunedAgent::TeamEdgeInfo info;
      info.team = t;
      info.program = agent.programs.size();
      agent.programs.push_back(edge.program);
      info.destination_is_team = store.is_team(edge.destination);
      info.destination = info.destination_is_team ? team_index.at(edge.destination)
                                                  : action_index.at(edge.destination);
      agent.team_edges.push_back(info);
    }
  }
  for (std::size_t a = 0; a < agent.action_vertices.size(); ++a) {
    for (const ActionEdge& edge : store.action_vertex(agent.action_vertices[a]).edges) {
      PrunedAgent::ActionEdgeInfo info;
      info.action_vertex = a;
      info.program = agent.programs.size();
      agent.programs.push_back(edge.program);
      info.action_class = edge.action_class;
      agent.action_edges.push_back(info);
    }
  }
  return agent;
}

Root materialize(const PrunedAgent& agent, VertexStore& store) {
  // Action vertices first (teams may reference them), then teams in reverse
  // BFS order is not safe for cycles, so teams are created as shells with
  // placeholder edges and filled in afterwards.
  std::vector<VertexId> av_ids;
  for (std::size_t a = 0; a < agent.action_vertices.size(); ++a) {
    ActionVertex av;
    for (const auto& edge : agent.action_edges) {
      if (edge.action_vertex == a) {
        av.edges.push_back(ActionEdge{agent.programs[edge.program], edge.action_class});
      }
    }
    av_ids.push_back(store.add_action_vertex(std::move(av)));
  }

  if (agent.kind == AgentKind::Maple) {
    const Root root{AgentKind::Maple, av_ids.at(0)};
    store.add_root(root);
    return root;
  }

  // Shell teams: a minimal valid pair of edges pointing at the first action
  // vertex, replaced once every team id exists.
  std::vector<VertexId> team_ids;
  for (std::size_t t = 0; t < agent.teams.size(); ++t) {
    Team shell;
    shell.edges.push_back(TeamEdge{agent.programs[0], av_ids.at(0)});
    shell.edges.push_back(TeamEdge{agent.programs[0], av_ids.at(0)});
    team_ids.push_back(store.add_team(std::move(shell)));
  }
  for (std::size_t t = 0; t < agent.teams.size(); ++t) {
    Team team;
    for (const auto& edge : agent.team_edges) {
      if (edge.team == t) {
        const VertexId dest = edge.destination_is_team ? team_ids[edge.destination]
                                                       : av_ids[edge.destination];
        team.edges.push_back(TeamEdge{agent.programs[edge.program], dest});
      }
    }
    store.replace_team(team_ids[t], std::move(team));
  }
  const Root root{AgentKind::Matpg, team_ids.at(0)};
  store.add_root(root);
  return root;
}

namespace {

// Expression DAG for symbolic substitution. Nodes are shared between
// registers, so building is linear in program length even when the printed
// form expands.
struct Expr {
  enum class Kind { Number, Observation, Operation };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::uint16_t obs_index = 0;
  double constant = 1.0;
  Opcode op = Opcode::Add;
  std::shared_ptr<const Expr> lhs;
  std::shared_ptr<const Expr> rhs;
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = v;
  return e;
}

ExprPtr make_observation(std::uint16_t index) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Observation;
  e->obs_index = index;
  return e;
}

ExprPtr make_operation(double constant, Opcode op, ExprPtr lhs, ExprPtr rhs) {
  // Constant-fold subtrees built purely from initial registers and
  // constants; anything touching an observation stays symbolic.
  const bool unary = arity(op) == 1;
  if (lhs->kind == Expr::Kind::Number && (unary || rhs->kind == Expr::Kind::Number)) {
    const double value =
        constant * apply_opcode(op, lhs->number, unary ? 0.0 : rhs->number);
    return make_number(value);
  }
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Operation;
  e->constant = constant;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = unary ? nullptr : std::move(rhs);
  return e;
}

// Precedence levels: 1 = additive, 2 = multiplicative, 3 = atom.
struct Rendered {
  std::string text;
  int level = 3;
};

Rendered render(const Expr& e);

std::string render_operand(const ExprPtr& e, int min_level) {
  Rendered r = render(*e);
  if (r.level < min_level) {
    return "(" + r.text + ")";
  }
  return r.text;
}

Rendered render(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number: {
      const std::string text = format_double(e.number);
      return {text, e.number < 0 ? 2 : 3};
    }
    case Expr::Kind::Observation:
      return {"s_" + std::to_string(e.obs_index), 3};
    case Expr::Kind::Operation:
      break;
  }

  Rendered body;
  switch (e.op) {
    case Opcode::Add:
      body = {render_operand(e.lhs, 1) + " + " + render_operand(e.rhs, 2), 1};
      break;
    case Opcode::Sub:
      body = {render_operand(e.lhs, 1) + " - " + render_operand(e.rhs, 2), 1};
      break;
    case Opcode::Mul:
      body = {render_operand(e.lhs, 2) + " * " + render_operand(e.rhs, 3), 2};
      break;
    case Opcode::Div:
      body = {render_operand(e.lhs, 2) + " / " + render_operand(e.rhs, 3), 2};
      break;
    case Opcode::Max:
      body = {"max(" + render(*e.lhs).text + ", " + render(*e.rhs).text + ")", 3};
      break;
    case Opcode::Mod:
      body = {"mod(" + render(*e.lhs).text + ", " + render(*e.rhs).text + ")", 3};
      break;
    case Opcode::Exp:
    case Opcode::Log:
    case Opcode::Sin:
    case Opcode::Cos:
    case Opcode::Tan:
      body = {std::string(opcode_name(e.op)) + "(" + render(*e.lhs).text + ")", 3};
      break;
  }
  if (e.constant == 1.0) {
    return body;
  }
  const std::string prefix = format_double(e.constant);
  std::string operand = body.level < 3 ? "(" + body.text + ")" : body.text;
  return {prefix + " * " + operand, 2};
}

}  // namespace

std::string render_expression(const Program& program) {
  std::array<ExprPtr, kRegisterCount> regs;
  for (auto& reg : regs) {
    reg = make_number(0.0);
  }
  for (const Instruction& line : program.lines()) {
    auto operand = [&](const OperandSource& src) -> ExprPtr {
      return src.kind == OperandSource::Kind::Register ? regs[src.index]
                                                       : make_observation(src.index);
    };
    regs[line.dest] =
        make_operation(line.constant, line.op, operand(line.lhs), operand(line.rhs));
  }
  return render(*regs[0]).text;
}

std::string expression_listing(const PrunedAgent& agent) {
  std::string out;
  for (std::size_t i = 0; i < agent.programs.size(); ++i) {
    out += "p_" + std::to_string(i) + " <- " + render_expression(agent.programs[i]) +
           "\n";
  }
  return out;
}

std::string to_dot(const PrunedAgent& agent) {
  std::string out = "digraph agent {\n  rankdir=LR;\n";
  for (std::size_t t = 0; t < agent.teams.size(); ++t) {
    out += "  T" + std::to_string(t) + " [shape=box,label=\"T_" + std::to_string(t) +
           "\"];\n";
  }
  for (std::size_t a = 0; a < agent.action_vertices.size(); ++a) {
    out += "  A" + std::to_string(a) + " [shape=ellipse,label=\"A_" +
           std::to_string(a) + "\"];\n";
  }
  for (const auto& edge : agent.action_edges) {
    // Terminal node per (action vertex, class).
    out += "  A" + std::to_string(edge.action_vertex) + "c" +
           std::to_string(edge.action_class) + " [shape=plaintext,label=\"class " +
           std::to_string(edge.action_class) + "\"];\n";
  }
  for (const auto& edge : agent.team_edges) {
    out += "  T" + std::to_string(edge.team) + " -> " +
           (edge.destination_is_team ? "T" : "A") + std::to_string(edge.destination) +
           " [label=\"p_" + std::to_string(edge.program) + "\"];\n";
  }
  for (const auto& edge : agent.action_edges) {
    out += "  A" + std::to_string(edge.action_vertex) + " -> A" +
           std::to_string(edge.action_vertex) + "c" +
           std::to_string(edge.action_class) + " [label=\"p_" +
           std::to_string(edge.program) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace matpg
