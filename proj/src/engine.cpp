#include "xmlgram/engine.hpp"

#include <algorithm>

#include "xmlgram/eval.hpp"
#include "xmlgram/normalize.hpp"
#include "xmlgram/render.hpp"
#include "xmlgram/wellformed.hpp"

namespace xmlgram {

ParseFailure::ParseFailure(Reason reason, const std::string& message, std::size_t eventIndex)
    : std::runtime_error(std::string(reasonName(reason)) + " at event " +
                         std::to_string(eventIndex) + ": " + message),
      reason_(reason),
      eventIndex_(eventIndex) {}

std::string_view reasonName(ParseFailure::Reason r) {
  switch (r) {
    case ParseFailure::Reason::NoPredictEntry: return "NoPredictEntry";
    case ParseFailure::Reason::TagMismatch: return "TagMismatch";
    case ParseFailure::Reason::GuardNonBoolean: return "GuardNonBoolean";
    case ParseFailure::Reason::UnexpectedEndOfEvents: return "UnexpectedEndOfEvents";
    case ParseFailure::Reason::BindArityMismatch: return "BindArityMismatch";
    case ParseFailure::Reason::MissingAttribute: return "MissingAttribute";
    case ParseFailure::Reason::EvalError: return "EvalError";
    case ParseFailure::Reason::IncompleteParse: return "IncompleteParse";
  }
  return "?";
}

namespace {

std::optional<LoopShape> matchLoop(const Grammar& g, std::size_t index) {
  const Clause& c = g.clauses[index];
  if (c.body.size() != 3) return std::nullopt;
  const auto* first = c.body[0].as<Bind>();
  const auto* second = c.body[1].as<Bind>();
  const auto* actions = c.body[2].as<Actions>();
  if (!first || !second || !actions) return std::nullopt;
  if (first->names.size() != 1 || second->names.size() != 1) return std::nullopt;
  const std::string& head = first->names.front();
  const std::string& tail = second->names.front();
  if (head == tail) return std::nullopt;
  for (const auto& p : c.params) {
    if (p == head || p == tail) return std::nullopt;
  }
  if (second->body.size() != 1) return std::nullopt;
  const auto* call = second->body.front().as<Call>();
  if (!call || call->name != c.name || call->args.size() != c.params.size()) return std::nullopt;
  for (std::size_t k = 0; k < c.params.size(); ++k) {
    const auto* ref = call->args[k].as<VarRef>();
    if (!ref || ref->name != c.params[k]) return std::nullopt;
  }
  // Every repetition must see the same parameters, and the folded action
  // may only depend on the parameters, the head and the tail.
  const NameSet bound = boundVars(first->body);
  for (const auto& p : c.params) {
    if (bound.count(p)) return std::nullopt;
  }
  for (const Expr& e : actions->exprs) {
    for (const auto& n : freeVars(e)) {
      if (n != head && n != tail && bound.count(n)) return std::nullopt;
    }
  }
  return LoopShape{index, head, tail};
}

Value popValue(std::vector<Value>& values) {
  Value v = std::move(values.back());
  values.pop_back();
  return v;
}

}  // namespace

std::map<std::string, LoopShape, std::less<>> findLoops(const Grammar& g) {
  std::map<std::string, LoopShape, std::less<>> out;
  std::map<std::string, int, std::less<>> matches;
  for (std::size_t i = 0; i < g.clauses.size(); ++i) {
    if (auto shape = matchLoop(g, i)) {
      if (++matches[g.clauses[i].name] == 1) out.emplace(g.clauses[i].name, *shape);
    }
  }
  for (const auto& [name, count] : matches) {
    if (count > 1) out.erase(name);
  }
  return out;
}

Machine::Machine(const Grammar& g, const PredictTable& table, EventSource& events)
    : g_(g), table_(table), events_(events), loops_(findLoops(g)) {
  if (!isNormalForm(g)) throw std::invalid_argument("the parsing machine needs a normal-form grammar");
}

void Machine::start(std::string_view rule, std::vector<Value> args) {
  program_.clear();
  program_.emplace_back(Invoke{std::string(rule), std::move(args)});
  env_ = Env();
  values_.clear();
  dump_.clear();
  stats_ = MachineStats();
  track();
}

bool Machine::terminal() const { return program_.empty() && dump_.empty(); }

void Machine::fail(ParseFailure::Reason reason, const std::string& message) const {
  throw ParseFailure(reason, message, events_.position());
}

Token Machine::lookahead() {
  const SaxEvent* ev = events_.peek();
  return ev ? tokenOf(*ev) : Token::endOfInput();
}

void Machine::pushSeq(std::span<const Body> seq) {
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) program_.emplace_back(BodyItem{&*it});
}

// Leaves exactly one value above `height`: the most recent one, or null.
void Machine::settle(std::size_t height) {
  if (values_.size() == height) {
    values_.push_back(Value::null());
  } else if (values_.size() > height + 1) {
    Value top = popValue(values_);
    values_.resize(height);
    values_.push_back(std::move(top));
  }
}

void Machine::track() {
  stats_.maxDumpDepth = std::max(stats_.maxDumpDepth, dump_.size());
  stats_.maxProgramSize = std::max(stats_.maxProgramSize, program_.size());
  stats_.maxValueStack = std::max(stats_.maxValueStack, values_.size());
}

Value Machine::evaluate(const std::vector<Expr>& exprs, const Env& env) const {
  try {
    return evalActions(exprs, env);
  } catch (const EvalError& e) {
    fail(ParseFailure::Reason::EvalError, e.what());
  }
}

Rule Machine::step() {
  ++stats_.steps;
  Rule fired;
  if (!dump_.empty() && program_.size() == dump_.back().programHeight) {
    Frame frame = std::move(dump_.back());
    dump_.pop_back();
    settle(frame.valueHeight);
    env_ = std::move(frame.env);
    fired = Rule::Return;
  } else {
    if (program_.empty()) throw std::logic_error("step on a terminal machine state");
    Item item = std::move(program_.back());
    program_.pop_back();
    if (auto* body = std::get_if<BodyItem>(&item)) {
      fired = stepBody(*body->body);
    } else if (auto* any = std::get_if<AnyEnd>(&item)) {
      fired = stepAnyEnd(std::move(*any));
    } else if (auto* bind = std::get_if<BindInstr>(&item)) {
      settle(bind->valueHeight);
      const Value& v = values_.back();
      const auto& names = *bind->names;
      if (names.size() == 1) {
        env_.bind(names.front(), v);
      } else if (v.kind() == Value::Kind::Tuple && v.items().size() == names.size()) {
        for (std::size_t i = 0; i < names.size(); ++i) env_.bind(names[i], v.items()[i]);
      } else {
        fail(ParseFailure::Reason::BindArityMismatch,
             "cannot bind " + std::to_string(names.size()) + " names to " + toTermString(v));
      }
      fired = Rule::BindValues;
    } else if (auto* end = std::get_if<TagEnd>(&item)) {
      const SaxEvent* ev = events_.peek();
      if (!ev) fail(ParseFailure::Reason::UnexpectedEndOfEvents, "expected </" + *end->tag + ">");
      const auto* close = std::get_if<EndTag>(ev);
      if (!close || close->tag != *end->tag) {
        fail(ParseFailure::Reason::TagMismatch,
             "expected </" + *end->tag + ">, found " + toString(*ev));
      }
      events_.pop();
      settle(end->valueHeight);
      fired = Rule::TagEnd;
    } else if (auto* invoke = std::get_if<Invoke>(&item)) {
      fired = callRule(invoke->rule, std::move(invoke->args));
    } else if (auto* loop = std::get_if<Loop>(&item)) {
      fired = stepLoop(std::move(*loop));
    } else {
      const auto& collect = std::get<LoopCollect>(item);
      settle(collect.valueHeight);
      Value head = popValue(values_);
      auto& owner = std::get<Loop>(program_.back());
      owner.heads.push_back(std::move(head));
      env_ = owner.env;
      fired = Rule::LoopCollect;
    }
  }
  track();
  return fired;
}

Rule Machine::callRule(const std::string& rule, std::vector<Value> args) {
  const Token tok = lookahead();
  const auto def = table_.predict(rule, tok);
  if (!def) {
    fail(ParseFailure::Reason::NoPredictEntry,
         "no prediction for rule " + rule + " on " + toString(tok));
  }
  const Clause& clause = g_.clauses[*def];
  if (clause.params.size() != args.size()) {
    throw std::logic_error("rule " + rule + " called with the wrong number of arguments");
  }
  dump_.push_back(Frame{program_.size(), std::move(env_), values_.size()});
  env_ = Env();
  for (std::size_t i = 0; i < args.size(); ++i) env_.bind(clause.params[i], std::move(args[i]));

  auto loop = loopsEnabled_ ? loops_.find(rule) : loops_.end();
  if (loop != loops_.end()) {
    program_.emplace_back(Loop{&loop->second, rule, env_, {}, values_.size()});
  } else {
    pushSeq(clause.body);
  }
  switch (tok.kind) {
    case Token::Kind::Tag: return Rule::CallOnStart;
    case Token::Kind::Text: return Rule::CallOnText;
    default: return Rule::CallOnEnd;
  }
}

Rule Machine::stepLoop(Loop loop) {
  const Clause& recursive = g_.clauses[loop.shape->recursive];
  if (loop.folding) {
    settle(loop.valueHeight);
    Value acc = popValue(values_);
    const auto& exprs = recursive.body[2].as<Actions>()->exprs;
    for (auto it = loop.heads.rbegin(); it != loop.heads.rend(); ++it) {
      Env env = loop.env;
      env.bind(loop.shape->head, std::move(*it));
      env.bind(loop.shape->tail, std::move(acc));
      acc = evaluate(exprs, env);
    }
    values_.push_back(std::move(acc));
    env_ = std::move(loop.env);
    return Rule::LoopFold;
  }

  const Token tok = lookahead();
  const auto def = table_.predict(loop.rule, tok);
  if (!def) {
    fail(ParseFailure::Reason::NoPredictEntry,
         "no prediction for rule " + loop.rule + " on " + toString(tok));
  }
  env_ = loop.env;
  if (*def == loop.shape->recursive) {
    const std::size_t height = values_.size();
    program_.emplace_back(std::move(loop));
    program_.emplace_back(LoopCollect{height});
    pushSeq(recursive.body[0].as<Bind>()->body);
  } else {
    loop.folding = true;
    loop.valueHeight = values_.size();
    program_.emplace_back(std::move(loop));
    pushSeq(g_.clauses[*def].body);
  }
  return Rule::LoopStep;
}

Rule Machine::stepBody(const Body& b) {
  if (const auto* call = b.as<Call>()) {
    std::vector<Value> args;
    args.reserve(call->args.size());
    for (const Expr& e : call->args) {
      try {
        args.push_back(evalExpr(e, env_));
      } catch (const EvalError& err) {
        fail(ParseFailure::Reason::EvalError, err.what());
      }
    }
    return callRule(call->name, std::move(args));
  }
  if (const auto* el = b.as<ElementSpec>()) return stepElement(*el);
  if (const auto* actions = b.as<Actions>()) {
    values_.push_back(evaluate(actions->exprs, env_));
    return Rule::Actions;
  }
  if (b.is<Ok>()) {
    values_.push_back(Value::null());
    return Rule::Ok;
  }
  if (b.is<Empty>()) {
    const SaxEvent* ev = events_.peek();
    if (ev && !std::holds_alternative<EndTag>(*ev)) {
      fail(ParseFailure::Reason::TagMismatch, "EMPTY expects no further content, found " + toString(*ev));
    }
    values_.push_back(Value::null());
    return Rule::Empty;
  }
  if (b.is<Text>()) {
    const SaxEvent* ev = events_.peek();
    if (!ev) fail(ParseFailure::Reason::UnexpectedEndOfEvents, "expected text");
    const auto* text = std::get_if<TextEvt>(ev);
    if (!text) fail(ParseFailure::Reason::TagMismatch, "expected text, found " + toString(*ev));
    values_.push_back(Value::string(text->text));
    events_.pop();
    return Rule::Text;
  }
  if (b.is<Any>()) {
    const SaxEvent* ev = events_.peek();
    if (!ev) fail(ParseFailure::Reason::UnexpectedEndOfEvents, "expected an element or text");
    if (std::holds_alternative<TextEvt>(*ev)) {
      events_.pop();
      values_.push_back(Value::null());
      return Rule::AnyText;
    }
    const auto* open = std::get_if<StartTag>(ev);
    if (!open) fail(ParseFailure::Reason::TagMismatch, "expected an element or text, found " + toString(*ev));
    std::string tag = open->tag;
    events_.pop();
    program_.emplace_back(AnyEnd{std::move(tag), true});
    return Rule::AnyStart;
  }
  if (const auto* bind = b.as<Bind>()) {
    program_.emplace_back(BindInstr{&bind->names, values_.size()});
    pushSeq(bind->body);
    return Rule::Bind;
  }
  throw std::logic_error("the parsing machine met a body outside normal form");
}

Rule Machine::stepElement(const ElementSpec& el) {
  const SaxEvent* ev = events_.peek();
  if (!ev) fail(ParseFailure::Reason::UnexpectedEndOfEvents, "expected <" + el.tag + ">");
  const auto* open = std::get_if<StartTag>(ev);
  if (!open || open->tag != el.tag) {
    fail(ParseFailure::Reason::TagMismatch, "expected <" + el.tag + ">, found " + toString(*ev));
  }
  Env env = env_;
  for (const auto& a : el.attrs) {
    auto it = open->attrs.find(a.attr);
    if (it == open->attrs.end()) {
      fail(ParseFailure::Reason::MissingAttribute,
           "<" + el.tag + "> has no attribute " + a.attr);
    }
    env.bind(a.var, Value::string(it->second));
  }
  const BodySeq* branch = &el.elseBody;
  for (const auto& gb : el.guarded) {
    bool holds = false;
    try {
      holds = evalGuard(gb.guard, env);
    } catch (const EvalError& e) {
      fail(e.kind() == EvalError::Kind::NonBooleanGuard ? ParseFailure::Reason::GuardNonBoolean
                                                        : ParseFailure::Reason::EvalError,
           e.what());
    }
    if (holds) {
      branch = &gb.body;
      break;
    }
  }
  events_.pop();
  env_ = std::move(env);
  program_.emplace_back(TagEnd{&el.tag, values_.size()});
  pushSeq(*branch);
  return Rule::Element;
}

Rule Machine::stepAnyEnd(AnyEnd item) {
  const SaxEvent* ev = events_.peek();
  if (!ev) fail(ParseFailure::Reason::UnexpectedEndOfEvents, "expected </" + item.tag + ">");
  if (const auto* close = std::get_if<EndTag>(ev)) {
    if (close->tag != item.tag) {
      fail(ParseFailure::Reason::TagMismatch, "expected </" + item.tag + ">, found " + toString(*ev));
    }
    events_.pop();
    if (item.outermost) values_.push_back(Value::null());
    return Rule::AnyClose;
  }
  if (const auto* open = std::get_if<StartTag>(ev)) {
    std::string inner = open->tag;
    events_.pop();
    program_.emplace_back(std::move(item));
    program_.emplace_back(AnyEnd{std::move(inner), false});
    return Rule::AnyNested;
  }
  events_.pop();
  program_.emplace_back(std::move(item));
  return Rule::AnySkipText;
}

Value Machine::result() {
  if (!terminal()) throw std::logic_error("result requested before the machine terminated");
  if (const SaxEvent* ev = events_.peek()) {
    fail(ParseFailure::Reason::IncompleteParse, "unconsumed input at " + toString(*ev));
  }
  if (values_.size() != 1) throw std::logic_error("terminal state without exactly one value");
  return values_.back();
}

Value run(const Grammar& g, const PredictTable& table, std::string_view startRule,
          std::vector<Value> args, EventSource& events, MachineStats* stats) {
  Machine m(g, table, events);
  m.start(startRule, std::move(args));
  while (!m.terminal()) m.step();
  Value v = m.result();
  if (stats) *stats = m.stats();
  return v;
}

Value run(const Grammar& g, const PredictTable& table, std::string_view startRule,
          std::vector<Value> args, std::span<const SaxEvent> events, MachineStats* stats) {
  VectorEventSource source(events);
  return run(g, table, startRule, std::move(args), source, stats);
}

}  // namespace xmlgram
