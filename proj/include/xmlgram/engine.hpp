#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "xmlgram/analysis.hpp"
#include "xmlgram/ast.hpp"
#include "xmlgram/env.hpp"
#include "xmlgram/sax.hpp"
#include "xmlgram/value.hpp"

namespace xmlgram {

class ParseFailure : public std::runtime_error {
 public:
  enum class Reason {
    NoPredictEntry,
    TagMismatch,
    GuardNonBoolean,
    UnexpectedEndOfEvents,
    BindArityMismatch,
    MissingAttribute,
    EvalError,
    IncompleteParse,
  };

  ParseFailure(Reason reason, const std::string& message, std::size_t eventIndex);

  Reason reason() const { return reason_; }
  /// Index of the event the machine was looking at (0-based).
  std::size_t eventIndex() const { return eventIndex_; }

 private:
  Reason reason_;
  std::size_t eventIndex_;
};

std::string_view reasonName(ParseFailure::Reason r);

/// Which transition fired. The numbered ones are the machine rules; the
/// rest cover items the rules leave implicit (OK, the start call) and the
/// iterative execution of list-building rules.
enum class Rule {
  CallOnStart,   // 1
  CallOnEnd,     // 2
  CallOnText,    // 3
  Return,        // 4
  Element,       // 5
  TagEnd,        // 6
  Actions,       // 7
  Empty,         // 8
  AnyText,       // 9
  AnyStart,      // 10
  AnyClose,      // 11
  AnyNested,     // 12
  AnySkipText,   // 13
  Bind,          // 14
  BindValues,    // 15
  Text,          // 16
  Ok,
  LoopStep,
  LoopCollect,
  LoopFold,
};

struct MachineStats {
  std::size_t steps = 0;
  std::size_t maxDumpDepth = 0;
  std::size_t maxProgramSize = 0;
  std::size_t maxValueStack = 0;
};

/// A rule of the form
///   d(v) ::= x = X  xs = d(v)  { e }.     plus any other definitions
/// is run as a loop: X repeats in the rule's own frame, the heads are kept,
/// and `e` is folded over them from the right once another definition ends
/// the repetition. Values are those of plain recursive execution.
struct LoopShape {
  std::size_t recursive = 0;  // index into Grammar::clauses
  std::string head;
  std::string tail;
};

/// Loop shapes of the rules of `g` that qualify.
std::map<std::string, LoopShape, std::less<>> findLoops(const Grammar& g);

/// The predictive parsing machine: program, environment, value stack,
/// event stream and dump. Requires a grammar in normal form and its table.
class Machine {
 public:
  Machine(const Grammar& g, const PredictTable& table, EventSource& events);

  /// Resets to the initial state for calling `rule` with `args`.
  void start(std::string_view rule, std::vector<Value> args = {});

  /// Empty program and empty dump.
  bool terminal() const;
  /// Fires exactly one rule. Throws ParseFailure when none applies.
  Rule step();
  /// At a terminal state: the synthesized value. Throws IncompleteParse if
  /// events remain.
  Value result();

  const MachineStats& stats() const { return stats_; }
  std::size_t dumpDepth() const { return dump_.size(); }
  std::size_t programSize() const { return program_.size(); }
  std::span<const Value> values() const { return values_; }
  const Env& env() const { return env_; }
  std::size_t eventsConsumed() const { return events_.position(); }

  /// Disables loop execution of list-building rules (for comparison runs).
  void setLoopsEnabled(bool on) { loopsEnabled_ = on; }

 private:
  struct BodyItem {
    const Body* body;
  };
  struct AnyEnd {
    std::string tag;
    bool outermost;
  };
  struct BindInstr {
    const std::vector<std::string>* names;
    std::size_t valueHeight;
  };
  struct TagEnd {
    const std::string* tag;
    std::size_t valueHeight;
  };
  struct Invoke {
    std::string rule;
    std::vector<Value> args;
  };
  struct Loop {
    const LoopShape* shape;
    std::string rule;
    Env env;
    std::vector<Value> heads;
    std::size_t valueHeight;
    bool folding = false;
    std::size_t foldDef = 0;
  };
  struct LoopCollect {
    std::size_t valueHeight;
  };
  using Item = std::variant<BodyItem, AnyEnd, BindInstr, TagEnd, Invoke, Loop, LoopCollect>;

  struct Frame {
    std::size_t programHeight;
    Env env;
    std::size_t valueHeight;
  };

  [[noreturn]] void fail(ParseFailure::Reason reason, const std::string& message) const;
  Token lookahead();
  void pushSeq(std::span<const Body> seq);
  void settle(std::size_t height);
  Rule callRule(const std::string& rule, std::vector<Value> args);
  Rule stepBody(const Body& b);
  Rule stepElement(const ElementSpec& el);
  Rule stepLoop(Loop loop);
  Rule stepAnyEnd(AnyEnd item);
  Value evaluate(const std::vector<Expr>& exprs, const Env& env) const;
  void track();

  const Grammar& g_;
  const PredictTable& table_;
  EventSource& events_;
  std::map<std::string, LoopShape, std::less<>> loops_;
  bool loopsEnabled_ = true;

  std::vector<Item> program_;
  Env env_;
  std::vector<Value> values_;
  std::vector<Frame> dump_;
  MachineStats stats_;
};

/// Runs `startRule(args)` to completion over `events`.
Value run(const Grammar& g, const PredictTable& table, std::string_view startRule,
          std::vector<Value> args, EventSource& events, MachineStats* stats = nullptr);
Value run(const Grammar& g, const PredictTable& table, std::string_view startRule,
          std::vector<Value> args, std::span<const SaxEvent> events,
          MachineStats* stats = nullptr);

}  // namespace xmlgram
