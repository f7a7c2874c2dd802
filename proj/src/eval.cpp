#include "xmlgram/eval.hpp"

namespace xmlgram {

namespace {

bool isConsChain(const Value& v) { return v.isTerm("Nil") || v.isTerm("Cons"); }

}  // namespace

std::optional<std::vector<Value>> listElements(const Value& v) {
  if (v.kind() == Value::Kind::List) {
    auto items = v.items();
    return std::vector<Value>(items.begin(), items.end());
  }
  std::vector<Value> out;
  const Value* cur = &v;
  while (true) {
    if (cur->isTerm("Nil") && cur->items().empty()) return out;
    if (!cur->isTerm("Cons") || cur->items().size() != 2) return std::nullopt;
    out.push_back(cur->items()[0]);
    cur = &cur->items()[1];
  }
}

Value evalExpr(const Expr& e, const Env& env) {
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          const Value* v = env.find(n.name);
          if (v == nullptr) {
            throw EvalError(EvalError::Kind::UnboundVariable, "unbound variable " + n.name, e.span);
          }
          return *v;
        } else if constexpr (std::is_same_v<T, StrLit>) {
          return Value::string(n.value);
        } else if constexpr (std::is_same_v<T, IntLit>) {
          return Value::integer(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return Value::boolean(n.value);
        } else if constexpr (std::is_same_v<T, NullLit>) {
          return Value::null();
        } else if constexpr (std::is_same_v<T, Construct>) {
          std::vector<Value> args;
          args.reserve(n.args.size());
          for (const Expr& a : n.args) args.push_back(evalExpr(a, env));
          if (n.ctor == kAddChildCtor && args.size() == 2) {
            const Value& parent = args[0];
            if (!parent.isTerm()) {
              throw EvalError(EvalError::Kind::NotATerm,
                              "addChild expects a term, got " + std::string(kindName(parent.kind())),
                              e.span);
            }
            std::vector<Value> children(parent.items().begin(), parent.items().end());
            children.push_back(args[1]);
            return Value::term(parent.ctor(), std::move(children));
          }
          return Value::term(n.ctor, std::move(args));
        } else if constexpr (std::is_same_v<T, ListLit>) {
          std::vector<Value> items;
          items.reserve(n.items.size());
          for (const Expr& a : n.items) items.push_back(evalExpr(a, env));
          return Value::list(std::move(items));
        } else if constexpr (std::is_same_v<T, ConsExpr>) {
          Value head = evalExpr(*n.head, env);
          Value tail = evalExpr(*n.tail, env);
          if (tail.kind() == Value::Kind::List) {
            std::vector<Value> items;
            items.reserve(tail.items().size() + 1);
            items.push_back(std::move(head));
            items.insert(items.end(), tail.items().begin(), tail.items().end());
            return Value::list(std::move(items));
          }
          if (isConsChain(tail)) return Value::term("Cons", {std::move(head), std::move(tail)});
          throw EvalError(EvalError::Kind::NotAList,
                          "cons onto a " + std::string(kindName(tail.kind())), e.span);
        } else if constexpr (std::is_same_v<T, Fold>) {
          Value over = evalExpr(*n.over, env);
          auto elems = listElements(over);
          if (!elems) {
            throw EvalError(EvalError::Kind::NotAList,
                            "iterate over a " + std::string(kindName(over.kind())), e.span);
          }
          Value acc = evalExpr(*n.init, env);
          Env local = env;
          for (Value& el : *elems) {
            local.bind(n.elemVar, std::move(el));
            local.bind(n.accVar, std::move(acc));
            acc = evalExpr(*n.step, local);
          }
          return acc;
        } else {
          static_assert(std::is_same_v<T, Compare>);
          bool same = evalExpr(*n.left, env) == evalExpr(*n.right, env);
          return Value::boolean(n.op == CompareOp::Eq ? same : !same);
        }
      },
      e.node);
}

Value evalActions(std::span<const Expr> exprs, const Env& env) {
  if (exprs.empty()) return Value::null();
  if (exprs.size() == 1) return evalExpr(exprs.front(), env);
  std::vector<Value> values;
  values.reserve(exprs.size());
  for (const Expr& e : exprs) values.push_back(evalExpr(e, env));
  return Value::tuple(std::move(values));
}

bool evalGuard(const Expr& e, const Env& env) {
  Value v = evalExpr(e, env);
  if (v.kind() != Value::Kind::Bool) {
    throw EvalError(EvalError::Kind::NonBooleanGuard,
                    "guard evaluated to a " + std::string(kindName(v.kind())), e.span);
  }
  return v.asBool();
}

}  // namespace xmlgram
