// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/symexec.hpp>

#include <skanf/keccak.hpp>

#include <algorithm>
#include <chrono>
#include <set>

namespace skanf
{
namespace
{
const Word mem_limit = 0xffffffffu;
/// Gasless stand-in for the interpreter's quadratic memory charge: one touch
/// larger than this faults like running out of gas would.
constexpr uint64_t touch_cap = 4u << 20;
constexpr int64_t child_gas = 8'000'000;

SymWord sym_const(const Word& v)
{
    return {v, make_const(v), {}};
}

bool contains_fresh(const SymExprPtr& e)
{
    if (e == nullptr)
        return false;
    if (e->kind == SymExpr::Kind::Fresh)
        return true;
    for (const auto& c : e->children)
        if (contains_fresh(c))
            return true;
    return false;
}

/// One byte of symbolic memory: a concrete shadow, taint, and the word-valued
/// expression the byte was sliced from (null when the byte is the plain
/// constant `concrete`).
struct MemCell
{
    uint8_t concrete = 0;
    bool known = true;  ///< False when the concrete shadow is unavailable (fallback mode).
    TaintSet taint;
    SymExprPtr src;
    uint8_t lane = 0;
};

/// Rebuilds a word expression from 32 cells. Prefers lane-atom form so
/// calldata provenance survives stores and loads; falls back to an OR-of-
/// shifted-BYTE tree for opaque sources.
SymExprPtr word_expr_of_cells(const std::array<MemCell, 32>& cells)
{
    // Identity fast path: the exact word that was stored.
    if (cells[0].src != nullptr)
    {
        bool identity = true;
        for (unsigned j = 0; j < 32; ++j)
            if (cells[j].src != cells[0].src || cells[j].lane != j)
            {
                identity = false;
                break;
            }
        if (identity)
            return cells[0].src;
    }

    std::array<ByteAtom, 32> atoms{};
    bool atom_form = true;
    for (unsigned j = 0; j < 32; ++j)
    {
        const auto& c = cells[j];
        if (c.src == nullptr)
            atoms[j] = ByteAtom::constant(c.concrete);
        else if (c.src->kind == SymExpr::Kind::Bytes)
            atoms[j] = c.src->atoms[c.lane];
        else
        {
            atom_form = false;
            break;
        }
    }
    if (atom_form)
        return make_bytes(atoms);

    SymExprPtr acc = make_const(0);
    for (unsigned j = 0; j < 32; ++j)
    {
        const auto& c = cells[j];
        SymExprPtr b;
        if (c.src == nullptr)
        {
            if (c.concrete == 0)
                continue;
            b = make_const(c.concrete);
        }
        else if (c.src->kind == SymExpr::Kind::Bytes)
        {
            const auto atom = c.src->atoms[c.lane];
            if (atom.kind == ByteAtom::Kind::Const && atom.value == 0)
                continue;
            std::array<ByteAtom, 32> single{};
            single[31] = atom;
            b = make_bytes(single);
        }
        else
        {
            b = make_op(SymOp::Byte, {make_const(c.lane), c.src});
        }
        const unsigned shift = 8 * (31 - j);
        if (shift != 0)
            b = make_op(SymOp::Shl, {make_const(shift), b});
        acc = (acc->is_const() && acc->value == 0) ? b : make_op(SymOp::Or, {acc, b});
    }
    return acc;
}

class SymMemory
{
public:
    [[nodiscard]] MemCell byte_at(uint64_t off) const
    {
        const auto it = cells_.find(off);
        return it == cells_.end() ? MemCell{} : it->second;
    }

    void set_byte(uint64_t off, MemCell c) { cells_[off] = std::move(c); }

    static MemCell cell_of(const SymWord& w, unsigned lane)
    {
        MemCell c;
        c.taint = w.taint.lane(lane);
        c.known = w.concrete.has_value();
        if (w.concrete)
            c.concrete = word_byte(*w.concrete, lane);
        if (w.expr != nullptr && !w.expr->is_const())
        {
            c.src = w.expr;
            c.lane = static_cast<uint8_t>(lane);
        }
        return c;
    }

    void store_word(uint64_t off, const SymWord& w)
    {
        for (unsigned j = 0; j < 32; ++j)
            set_byte(off + j, cell_of(w, j));
    }

    [[nodiscard]] SymWord load_word(uint64_t off) const
    {
        std::array<MemCell, 32> cells;
        bool all_known = true;
        SymWord out;
        std::array<uint8_t, 32> raw{};
        for (unsigned j = 0; j < 32; ++j)
        {
            cells[j] = byte_at(off + j);
            all_known = all_known && cells[j].known;
            raw[j] = cells[j].concrete;
            out.taint.lane(j) = cells[j].taint;
        }
        if (all_known)
            out.concrete = word_from_bytes(bytes_view{raw.data(), raw.size()});
        out.expr = word_expr_of_cells(cells);
        if (!out.concrete && out.expr->is_const())
            out.concrete = out.expr->value;
        return out;
    }

    [[nodiscard]] std::vector<MemCell> slice(uint64_t off, uint64_t len) const
    {
        std::vector<MemCell> region(len);
        for (uint64_t i = 0; i < len; ++i)
            region[i] = byte_at(off + i);
        return region;
    }

private:
    std::map<uint64_t, MemCell> cells_;
};

/// A single-byte expression for one region cell (the keccak child form).
SymExprPtr cell_byte_expr(const MemCell& c)
{
    if (c.src == nullptr)
        return make_const(c.concrete);
    if (c.src->kind == SymExpr::Kind::Bytes)
    {
        const auto atom = c.src->atoms[c.lane];
        if (atom.kind == ByteAtom::Kind::Const)
            return make_const(atom.value);
        return make_calldata_byte(atom.index);
    }
    return make_op(SymOp::Byte, {make_const(c.lane), c.src});
}

/// Word expression of `count` region bytes right-aligned, zero beyond the
/// region (the shape of an outgoing-call parameter).
SymExprPtr region_word_expr(const std::vector<MemCell>& region, size_t start, size_t count)
{
    std::array<MemCell, 32> cells{};
    for (size_t i = 0; i < count && i < 32; ++i)
        if (start + i < region.size())
            cells[32 - count + i] = region[start + i];
    return word_expr_of_cells(cells);
}

struct PathState
{
    size_t idx = 0;  ///< Stream index into the instrumented view.
    std::vector<SymWord> stack;
    SymMemory memory;
    std::map<Word, SymWord> storage_overlay;
    std::vector<SymExprPtr> constraints;
    std::vector<SinkRecord> sinks;  ///< Finalized when the path ends.
    WorldState world;
    uint32_t table_visits = 0;
    uint64_t steps = 0;
    uint32_t fresh_counter = 0;
};

/// Unified machine: with a seed it replays one concrete path and shadows it
/// symbolically (concolic); without one it treats calldata as unknown and
/// reports forks at symbolic branches for the driver to explore.
class SymMachine
{
public:
    SymMachine(const InstrumentedProgram& ip, const CodeView& view, const Address& self,
        const ExploreConfig& config, const SeedInput* seed)
      : view_{view}, config_{config}, self_{self}, seed_{seed}, concolic_{seed != nullptr},
        table_active_{ip.obfuscated}
    {
        if (concolic_)
        {
            caller_ = seed->caller;
            origin_ = seed->origin;
            callvalue_ = seed->value;
            calldata_size_ = seed->calldata.size();
        }
        else
        {
            caller_ = config.adversary;
            origin_ = config.recorded_origin.value_or(config.adversary);
            callvalue_ = config.call_value;
            calldata_size_ = config.assumed_calldata_size;
        }
    }

    [[nodiscard]] PathState initial_state(const WorldState& world)
    {
        block_number_ = world.block.number;
        if (config_.check_consistency && concolic_)
        {
            check_env_ = env_assignment();
            checking_ = true;
        }
        PathState st;
        st.world = world;
        if (callvalue_ > 0)
        {
            auto& from = st.world.get_or_create(caller_);
            if (from.balance >= callvalue_)
            {
                from.balance -= callvalue_;
                st.world.get_or_create(self_).balance += callvalue_;
            }
        }
        return st;
    }

    /// The concrete environment paths run under; the solver grounds
    /// constraints with it when pruning and solving.
    [[nodiscard]] Assignment env_assignment() const
    {
        Assignment a;
        a.caller = caller_;
        a.origin = origin_;
        a.call_value = callvalue_;
        a.block_number = block_number_;
        if (concolic_)
            for (uint32_t i = 0; i < seed_->calldata.size(); ++i)
                a.calldata[i] = seed_->calldata[i];
        return a;
    }

    struct StepOut
    {
        enum class Kind
        {
            Continue,
            Halt,
            Fork,      ///< Symbolic JUMPI; driver clones the state.
            TableCap,  ///< Branch-table re-entry exceeded the visit cap.
        };

        Kind kind = Kind::Continue;
        Status status = Status::Fault;
        std::string fault;
        SymExprPtr cond;
        size_t taken_idx = 0;
        size_t fall_idx = 0;
        bool taken_valid = true;  ///< Taken side lands on a valid JUMPDEST.
        bool taken_enters_table = false;
    };

    StepOut step(PathState& st)
    {
        try
        {
            return do_step(st);
        }
        catch (const PathFault& f)
        {
            StepOut out;
            out.kind = StepOut::Kind::Halt;
            out.status = Status::Fault;
            out.fault = f.reason;
            return out;
        }
    }

    /// Stamps every sink the path produced with the full constraint list and
    /// the halt outcome, and computes its calldata pinning.
    void finalize_path(PathState& st, Status status, bool reached_halt) const
    {
        for (auto& s : st.sinks)
        {
            s.constraints = st.constraints;
            s.halt_status = status;
            s.reached_halt = reached_halt;

            std::set<uint32_t> sym;
            const auto collect = [&sym](const SinkParam& p) {
                for (const uint32_t i : p.taint.calldata_indices())
                    sym.insert(i);
            };
            collect(s.site.target);
            collect(s.site.value);
            if (s.site.has_selector)
                collect(s.site.selector);
            for (const auto& arg : s.site.args)
                collect(arg);
            s.symbolic_bytes.assign(sym.begin(), sym.end());
            if (concolic_)
                for (uint32_t i = 0; i < seed_->calldata.size(); ++i)
                    if (!sym.contains(i))
                        s.pins[i] = seed_->calldata[i];
        }
    }

private:
    struct PathFault
    {
        std::string reason;
    };

    const CodeView& view_;
    ExploreConfig config_;
    Address self_;
    const SeedInput* seed_;
    bool concolic_;
    bool table_active_;
    Address caller_;
    Address origin_;
    Word callvalue_;
    size_t calldata_size_ = 0;
    uint64_t block_number_ = 0;
    bool checking_ = false;
    Assignment check_env_;

    [[noreturn]] static void fault(std::string reason) { throw PathFault{std::move(reason)}; }

    static void need(const PathState& st, size_t n)
    {
        if (st.stack.size() < n)
            fault("stack underflow");
    }

    static SymWord pop(PathState& st)
    {
        SymWord w = std::move(st.stack.back());
        st.stack.pop_back();
        return w;
    }

    void push(PathState& st, SymWord w) const
    {
        if (st.stack.size() >= 1024)
            fault("stack overflow");
        if (w.expr == nullptr)
            w.expr = make_const(w.concrete.value_or(0));
        if (!w.concrete && w.expr->is_const())
            w.concrete = w.expr->value;
        if (checking_ && w.concrete && !contains_fresh(w.expr) &&
            eval(w.expr, check_env_) != *w.concrete)
            fault("consistency divergence");
        st.stack.push_back(std::move(w));
    }

    /// Records that this path relies on the operand's concrete value (memory
    /// offsets, storage slots, jump operands computed from symbolic input).
    static void pin_operand(PathState& st, const SymWord& w)
    {
        if (w.concrete && w.expr != nullptr && !w.expr->is_const())
            st.constraints.push_back(make_op(SymOp::Eq, {w.expr, make_const(*w.concrete)}));
    }

    uint64_t mem_operand(PathState& st, const SymWord& w, const char* what) const
    {
        if (!w.concrete)
            fault(std::string{"symbolic "} + what);
        if (*w.concrete > mem_limit)
            fault("memory overflow");
        pin_operand(st, w);
        return static_cast<uint64_t>(*w.concrete);
    }

    static void check_touch(uint64_t len)
    {
        if (len > touch_cap)
            fault("out of gas");
    }

    static StepOut halt(Status status)
    {
        StepOut out;
        out.kind = StepOut::Kind::Halt;
        out.status = status;
        return out;
    }

    static StepOut cont() { return {}; }

    SymWord binary(SymOp op, Word (*f)(const Word&, const Word&), const SymWord& a,
        const SymWord& b) const
    {
        SymWord out;
        if (a.concrete && b.concrete)
            out.concrete = f(*a.concrete, *b.concrete);
        out.expr = make_op(op, {a.expr, b.expr});
        switch (op)
        {
        case SymOp::And:
        {
            std::array<uint8_t, 32> ab{};
            std::array<uint8_t, 32> bb{};
            if (a.concrete)
                ab = word_to_bytes(*a.concrete);
            if (b.concrete)
                bb = word_to_bytes(*b.concrete);
            out.taint = propagate_and(a.taint, b.taint, a.concrete ? ab.data() : nullptr,
                b.concrete ? bb.data() : nullptr);
            break;
        }
        case SymOp::Or:
        case SymOp::Xor:
            out.taint = propagate_bytewise(a.taint, b.taint);
            break;
        default:
            out.taint = propagate_smear({&a.taint, &b.taint});
            break;
        }
        return out;
    }

    StepOut take_jump(PathState& st, const Word& dest) const
    {
        if (dest > mem_limit)
            fault("invalid jump");
        const auto pc = static_cast<uint32_t>(dest);
        if (!view_.jumpdests.contains(pc))
            fault("invalid jump");
        const auto idx = view_.index_of(pc);
        if (!idx)
            fault("invalid jump");
        if (!concolic_ && table_active_ && pc == BranchTable::base_pc)
        {
            if (++st.table_visits > config_.table_visit_cap)
            {
                StepOut out;
                out.kind = StepOut::Kind::TableCap;
                return out;
            }
        }
        st.idx = *idx;
        return cont();
    }

    SymWord load_calldata_word(uint64_t off) const
    {
        if (off >= calldata_size_)
            return sym_const(0);
        SymWord w;
        const auto off32 = static_cast<uint32_t>(off);
        w.expr = make_calldata_word(off32, calldata_size_);
        w.taint = TaintVec::calldata_word(off32, calldata_size_);
        if (concolic_)
        {
            std::array<uint8_t, 32> raw{};
            for (unsigned j = 0; j < 32; ++j)
                if (off + j < seed_->calldata.size())
                    raw[j] = seed_->calldata[off + j];
            w.concrete = word_from_bytes(bytes_view{raw.data(), raw.size()});
        }
        else if (w.expr->is_const())
        {
            w.concrete = w.expr->value;
        }
        return w;
    }

    MemCell calldata_cell(uint64_t idx) const
    {
        MemCell c;
        if (idx >= calldata_size_)
            return c;  // zero padding
        const auto i = static_cast<uint32_t>(idx);
        c.taint = TaintSet{TaintLabel::calldata_byte(i)};
        c.src = make_calldata_byte(i);
        c.lane = 31;
        if (concolic_)
        {
            c.known = true;
            c.concrete = i < seed_->calldata.size() ? seed_->calldata[i] : 0;
        }
        else
        {
            c.known = false;
        }
        return c;
    }

    SymWord fresh_word(PathState& st, std::string name, TaintVec taint) const
    {
        SymWord w;
        w.expr = make_fresh(st.fresh_counter++, std::move(name));
        w.taint = std::move(taint);
        return w;
    }

    /// Drops overlay entries a nested call rewrote underneath us, so later
    /// SLOADs see the world the callee left behind.
    void sync_overlay(PathState& st) const
    {
        const auto* acct = st.world.find(self_);
        for (auto it = st.storage_overlay.begin(); it != st.storage_overlay.end();)
        {
            if (!it->second.concrete)
            {
                ++it;
                continue;
            }
            Word now = 0;
            if (acct != nullptr)
            {
                const auto s = acct->storage.find(it->first);
                if (s != acct->storage.end())
                    now = s->second;
            }
            if (now != *it->second.concrete)
                it = st.storage_overlay.erase(it);
            else
                ++it;
        }
    }

    void do_call(PathState& st, const Instruction& instr);

    StepOut do_step(PathState& st)
    {
        if (st.idx >= view_.stream.size())
            return halt(Status::Success);
        const auto& instr = view_.stream[st.idx];
        ++st.steps;
        const auto& info = instr.info();
        if (!info.defined)
            fault("invalid opcode");

        const uint8_t opcode = instr.opcode;
        if (is_push(opcode))
        {
            push(st, sym_const(instr.push_value()));
            ++st.idx;
            return cont();
        }
        if (is_dup(opcode))
        {
            const unsigned n = opcode - static_cast<uint8_t>(Op::DUP1) + 1;
            need(st, n);
            push(st, st.stack[st.stack.size() - n]);
            ++st.idx;
            return cont();
        }
        if (is_swap(opcode))
        {
            const unsigned n = opcode - static_cast<uint8_t>(Op::SWAP1) + 1;
            need(st, n + 1);
            std::swap(st.stack[st.stack.size() - 1], st.stack[st.stack.size() - 1 - n]);
            ++st.idx;
            return cont();
        }
        if (is_log(opcode))
        {
            const unsigned topics = opcode - static_cast<uint8_t>(Op::LOG0);
            need(st, 2 + topics);
            pop(st);
            const auto len = pop(st);
            if (len.concrete && *len.concrete > mem_limit)
                fault("memory overflow");
            for (unsigned i = 0; i < topics; ++i)
                pop(st);
            ++st.idx;
            return cont();
        }

        using namespace word_ops;
        const auto binop = [&](SymOp sop, Word (*f)(const Word&, const Word&)) {
            need(st, 2);
            const auto a = pop(st);
            const auto b = pop(st);
            push(st, binary(sop, f, a, b));
            ++st.idx;
            return cont();
        };
        const auto ternary = [&](SymOp sop, Word (*f)(const Word&, const Word&, const Word&)) {
            need(st, 3);
            const auto a = pop(st);
            const auto b = pop(st);
            const auto n = pop(st);
            SymWord out;
            if (a.concrete && b.concrete && n.concrete)
                out.concrete = f(*a.concrete, *b.concrete, *n.concrete);
            out.expr = make_op(sop, {a.expr, b.expr, n.expr});
            out.taint = propagate_smear({&a.taint, &b.taint, &n.taint});
            push(st, std::move(out));
            ++st.idx;
            return cont();
        };
        const auto unary = [&](SymOp sop, Word (*f)(const Word&)) {
            need(st, 1);
            const auto a = pop(st);
            SymWord out;
            if (a.concrete)
                out.concrete = f(*a.concrete);
            out.expr = make_op(sop, {a.expr});
            out.taint = propagate_smear({&a.taint});
            push(st, std::move(out));
            ++st.idx;
            return cont();
        };

        switch (instr.op())
        {
        case Op::STOP:
            return halt(Status::Success);
        case Op::ADD:
            return binop(SymOp::Add, add);
        case Op::MUL:
            return binop(SymOp::Mul, mul);
        case Op::SUB:
            return binop(SymOp::Sub, sub);
        case Op::DIV:
            return binop(SymOp::Div, div);
        case Op::SDIV:
            return binop(SymOp::Sdiv, sdiv);
        case Op::MOD:
            return binop(SymOp::Mod, mod);
        case Op::SMOD:
            return binop(SymOp::Smod, smod);
        case Op::ADDMOD:
            return ternary(SymOp::Addmod, addmod);
        case Op::MULMOD:
            return ternary(SymOp::Mulmod, mulmod);
        case Op::EXP:
            return binop(SymOp::Exp, exp);
        case Op::SIGNEXTEND:
            return binop(SymOp::Signextend, signextend);
        case Op::LT:
            return binop(SymOp::Lt, lt);
        case Op::GT:
            return binop(SymOp::Gt, gt);
        case Op::SLT:
            return binop(SymOp::Slt, slt);
        case Op::SGT:
            return binop(SymOp::Sgt, sgt);
        case Op::EQ:
            return binop(SymOp::Eq, eq);
        case Op::ISZERO:
            return unary(SymOp::Iszero, iszero);
        case Op::AND:
            return binop(SymOp::And, and_);
        case Op::OR:
            return binop(SymOp::Or, or_);
        case Op::XOR:
            return binop(SymOp::Xor, xor_);
        case Op::NOT:
            return unary(SymOp::Not, not_);
        case Op::BYTE:
            return binop(SymOp::Byte, byte);
        case Op::SHL:
            return binop(SymOp::Shl, shl);
        case Op::SHR:
            return binop(SymOp::Shr, shr);
        case Op::SAR:
            return binop(SymOp::Sar, sar);
        case Op::KECCAK256:
        {
            need(st, 2);
            const auto off_w = pop(st);
            const auto len_w = pop(st);
            if (len_w.concrete && *len_w.concrete > mem_limit)
                fault("memory overflow");
            const uint64_t len = mem_operand(st, len_w, "hash length");
            const uint64_t off = mem_operand(st, off_w, "memory offset");
            check_touch(len);
            std::vector<SymExprPtr> kids;
            kids.reserve(len);
            bytes raw(len, 0);
            bool all_known = true;
            TaintSet flat;
            for (uint64_t i = 0; i < len; ++i)
            {
                const auto c = st.memory.byte_at(off + i);
                raw[i] = c.concrete;
                all_known = all_known && c.known;
                flat.merge(c.taint);
                kids.push_back(cell_byte_expr(c));
            }
            SymWord out;
            out.expr = make_keccak(std::move(kids));
            if (all_known)
                out.concrete = keccak256_word(raw);
            out.taint = TaintVec::smeared(std::move(flat));
            push(st, std::move(out));
            ++st.idx;
            return cont();
        }
        case Op::ADDRESS:
            push(st, sym_const(self_.to_word()));
            ++st.idx;
            return cont();
        case Op::BALANCE:
        {
            need(st, 1);
            const auto a = pop(st);
            if (a.concrete)
            {
                const auto* acct = st.world.find(Address::from_word(*a.concrete));
                SymWord out = sym_const(acct ? acct->balance : Word{0});
                out.taint = TaintVec::smeared(a.taint.flat());
                pin_operand(st, a);
                push(st, std::move(out));
            }
            else
            {
                push(st, fresh_word(st, "balance", TaintVec::smeared(a.taint.flat())));
            }
            ++st.idx;
            return cont();
        }
        case Op::ORIGIN:
            push(st, {origin_.to_word(), make_env(EnvVar::Origin),
                         TaintVec::smeared({TaintLabel::origin()})});
            ++st.idx;
            return cont();
        case Op::CALLER:
            push(st, {caller_.to_word(), make_env(EnvVar::Caller),
                         TaintVec::smeared({TaintLabel::caller()})});
            ++st.idx;
            return cont();
        case Op::CALLVALUE:
            push(st, {callvalue_, make_env(EnvVar::CallValue),
                         TaintVec::smeared({TaintLabel::call_value()})});
            ++st.idx;
            return cont();
        case Op::CALLDATALOAD:
        {
            need(st, 1);
            const auto off = pop(st);
            if (!off.concrete)
                fault("symbolic calldata offset");
            if (*off.concrete > mem_limit)
            {
                push(st, sym_const(0));
            }
            else
            {
                pin_operand(st, off);
                push(st, load_calldata_word(static_cast<uint64_t>(*off.concrete)));
            }
            ++st.idx;
            return cont();
        }
        case Op::CALLDATASIZE:
            push(st, sym_const(calldata_size_));
            ++st.idx;
            return cont();
        case Op::CALLDATACOPY:
        {
            need(st, 3);
            const auto dst_w = pop(st);
            const auto src_w = pop(st);
            const auto len_w = pop(st);
            if (len_w.concrete && *len_w.concrete > mem_limit)
                fault("memory overflow");
            const uint64_t len = mem_operand(st, len_w, "copy length");
            const uint64_t dst = mem_operand(st, dst_w, "memory offset");
            if (!src_w.concrete)
                fault("symbolic calldata offset");
            pin_operand(st, src_w);
            check_touch(len);
            const bool src_huge = *src_w.concrete > mem_limit;
            const uint64_t src = src_huge ? 0 : static_cast<uint64_t>(*src_w.concrete);
            for (uint64_t i = 0; i < len; ++i)
                st.memory.set_byte(dst + i, src_huge ? MemCell{} : calldata_cell(src + i));
            ++st.idx;
            return cont();
        }
        case Op::COINBASE:
            push(st, sym_const(st.world.block.coinbase.to_word()));
            ++st.idx;
            return cont();
        case Op::TIMESTAMP:
            push(st, sym_const(st.world.block.timestamp));
            ++st.idx;
            return cont();
        case Op::NUMBER:
            push(st, {Word{block_number_}, make_env(EnvVar::BlockNumber), {}});
            ++st.idx;
            return cont();
        case Op::CHAINID:
            push(st, sym_const(st.world.block.chain_id));
            ++st.idx;
            return cont();
        case Op::POP:
            need(st, 1);
            pop(st);
            ++st.idx;
            return cont();
        case Op::MLOAD:
        {
            need(st, 1);
            const auto off = pop(st);
            const uint64_t o = mem_operand(st, off, "memory offset");
            push(st, st.memory.load_word(o));
            ++st.idx;
            return cont();
        }
        case Op::MSTORE:
        {
            need(st, 2);
            const auto off = pop(st);
            const auto val = pop(st);
            const uint64_t o = mem_operand(st, off, "memory offset");
            st.memory.store_word(o, val);
            ++st.idx;
            return cont();
        }
        case Op::MSTORE8:
        {
            need(st, 2);
            const auto off = pop(st);
            const auto val = pop(st);
            const uint64_t o = mem_operand(st, off, "memory offset");
            MemCell c;
            c.taint = val.taint.lane(31);
            c.known = val.concrete.has_value();
            if (val.concrete)
                c.concrete = word_byte(*val.concrete, 31);
            if (val.expr != nullptr && !val.expr->is_const())
            {
                c.src = val.expr;
                c.lane = 31;
            }
            st.memory.set_byte(o, std::move(c));
            ++st.idx;
            return cont();
        }
        case Op::SLOAD:
        {
            need(st, 1);
            const auto slot = pop(st);
            const TaintSet slot_flat = slot.taint.flat();
            SymWord out;
            if (!slot.concrete)
            {
                if (concolic_)
                    fault("symbolic storage slot");
                out = fresh_word(st, "sload", TaintVec::smeared(slot_flat));
            }
            else
            {
                pin_operand(st, slot);
                const Word key = *slot.concrete;
                const auto it = st.storage_overlay.find(key);
                if (it != st.storage_overlay.end())
                {
                    out = it->second;
                }
                else
                {
                    Word v = 0;
                    if (const auto* acct = st.world.find(self_))
                    {
                        const auto s = acct->storage.find(key);
                        if (s != acct->storage.end())
                            v = s->second;
                    }
                    if (concolic_)
                    {
                        out = sym_const(v);
                    }
                    else
                    {
                        // One fresh variable per slot per path, so repeated
                        // reads of the same slot stay correlated.
                        out = fresh_word(st, "sload", {});
                        st.storage_overlay.emplace(key, out);
                    }
                }
                for (unsigned j = 0; j < 32; ++j)
                    out.taint.lane(j).merge(slot_flat);
            }
            push(st, std::move(out));
            ++st.idx;
            return cont();
        }
        case Op::SSTORE:
        {
            need(st, 2);
            const auto slot = pop(st);
            const auto val = pop(st);
            if (!slot.concrete)
            {
                if (concolic_)
                    fault("symbolic storage slot");
                // Unaddressable symbolic write: dropped; later reads of any
                // slot return fresh variables anyway in fallback mode.
                ++st.idx;
                return cont();
            }
            pin_operand(st, slot);
            const Word key = *slot.concrete;
            const TaintSet slot_flat = slot.taint.flat();
            SymWord stored = val;
            for (unsigned j = 0; j < 32; ++j)
                stored.taint.lane(j).merge(slot_flat);
            st.storage_overlay[key] = stored;
            if (val.concrete)
            {
                auto& storage = st.world.get_or_create(self_).storage;
                if (*val.concrete == 0)
                    storage.erase(key);
                else
                    storage[key] = *val.concrete;
            }
            ++st.idx;
            return cont();
        }
        case Op::JUMP:
        {
            need(st, 1);
            const auto dest = pop(st);
            if (!dest.concrete)
                fault("symbolic jump destination");
            pin_operand(st, dest);
            return take_jump(st, *dest.concrete);
        }
        case Op::JUMPI:
        {
            need(st, 2);
            const auto dest = pop(st);
            const auto cond = pop(st);
            if (!dest.concrete)
                fault("symbolic jump destination");
            pin_operand(st, dest);
            if (cond.concrete)
            {
                const bool taken = *cond.concrete != 0;
                if (cond.expr != nullptr && !cond.expr->is_const())
                    st.constraints.push_back(
                        taken ? cond.expr : make_op(SymOp::Iszero, {cond.expr}));
                if (taken)
                    return take_jump(st, *dest.concrete);
                ++st.idx;
                return cont();
            }
            StepOut out;
            out.kind = StepOut::Kind::Fork;
            out.cond = cond.expr;
            out.fall_idx = st.idx + 1;
            const Word d = *dest.concrete;
            out.taken_valid = false;
            if (d <= mem_limit)
            {
                const auto pc = static_cast<uint32_t>(d);
                const auto idx = view_.index_of(pc);
                if (view_.jumpdests.contains(pc) && idx)
                {
                    out.taken_valid = true;
                    out.taken_idx = *idx;
                    out.taken_enters_table = table_active_ && pc == BranchTable::base_pc;
                }
            }
            return out;
        }
        case Op::PC:
            if (!instr.pc)
                fault("pc unavailable");
            push(st, sym_const(*instr.pc));
            ++st.idx;
            return cont();
        case Op::GAS:
            push(st, sym_const(child_gas));
            ++st.idx;
            return cont();
        case Op::JUMPDEST:
            ++st.idx;
            return cont();
        case Op::CALL:
        case Op::STATICCALL:
            do_call(st, instr);
            ++st.idx;
            return cont();
        case Op::RETURN:
        {
            need(st, 2);
            pop(st);
            pop(st);
            return halt(Status::Success);
        }
        case Op::REVERT:
        {
            need(st, 2);
            pop(st);
            pop(st);
            return halt(Status::Revert);
        }
        case Op::SELFDESTRUCT:
            need(st, 1);
            pop(st);
            return halt(Status::Success);
        case Op::INVALID:
            fault("invalid opcode");
        default:
            fault(std::string{"unsupported: "} + std::string{info.name});
        }
    }
};

void SymMachine::do_call(PathState& st, const Instruction& instr)
{
    const bool is_static_call = instr.op() == Op::STATICCALL;
    need(st, is_static_call ? 6 : 7);
    pop(st);  // gas: not modeled symbolically
    const auto target = pop(st);
    const SymWord value = is_static_call ? sym_const(0) : pop(st);
    const auto in_off = pop(st);
    const auto in_len = pop(st);
    const auto out_off = pop(st);
    const auto out_len = pop(st);

    std::vector<MemCell> region;
    bool region_tainted = true;
    if (in_off.concrete && in_len.concrete)
    {
        if (*in_off.concrete > mem_limit || *in_len.concrete > mem_limit)
            fault("memory overflow");
        check_touch(static_cast<uint64_t>(*in_len.concrete));
        pin_operand(st, in_off);
        pin_operand(st, in_len);
        region = st.memory.slice(static_cast<uint64_t>(*in_off.concrete),
            static_cast<uint64_t>(*in_len.concrete));
        region_tainted = !in_off.taint.empty() || !in_len.taint.empty();
    }

    bytes raw(region.size(), 0);
    std::vector<TaintSet> region_taint(region.size());
    bool region_known = in_off.concrete && in_len.concrete;
    for (size_t i = 0; i < region.size(); ++i)
    {
        raw[i] = region[i].concrete;
        region_taint[i] = region[i].taint;
        region_known = region_known && region[i].known;
    }

    const Address target_addr = Address::from_word(target.concrete.value_or(Word{0}));
    const Word value_now = value.concrete.value_or(Word{0});

    SinkRecord sink;
    sink.site = sink_decompose(instr.pc.value_or(0), instr.opcode, target_addr, target.taint,
        value_now, value.taint, raw, region_taint, region_tainted, calldata_size_);
    sink.target_expr = target.expr;
    sink.value_expr = value.expr;
    if (sink.site.has_selector)
        sink.selector_expr = region_word_expr(region, 0, 4);
    for (size_t k = 0; k < sink.site.args.size(); ++k)
        sink.arg_exprs.push_back(region_word_expr(region, 4 + 32 * k, 32));
    sink.calldata_len = calldata_size_;
    sink.caller = caller_;
    sink.origin = origin_;
    sink.recorded_origin = !concolic_ && config_.recorded_origin.has_value();
    sink.call_value = callvalue_;
    sink.block_number = block_number_;
    st.sinks.push_back(std::move(sink));

    TaintSet in_flat = merged(target.taint.flat(), value.taint.flat());
    for (const auto& t : region_taint)
        in_flat.merge(t);

    const bool can_exec = target.concrete && value.concrete && region_known;
    if (can_exec)
    {
        const auto res = call_message(st.world, self_, origin_, target_addr, value_now, raw,
            is_static_call, child_gas);
        const Word flag = res.status == Status::Success ? 1 : 0;
        if (out_off.concrete && out_len.concrete && *out_off.concrete <= mem_limit &&
            *out_len.concrete <= mem_limit)
        {
            pin_operand(st, out_off);
            pin_operand(st, out_len);
            const auto dst = static_cast<uint64_t>(*out_off.concrete);
            const uint64_t n = std::min<uint64_t>(static_cast<uint64_t>(*out_len.concrete),
                res.return_data.size());
            check_touch(n);
            for (uint64_t i = 0; i < n; ++i)
            {
                MemCell c;
                c.concrete = res.return_data[i];
                c.taint = in_flat;
                st.memory.set_byte(dst + i, std::move(c));
            }
        }
        sync_overlay(st);
        push(st, {flag, make_const(flag), TaintVec::smeared(std::move(in_flat))});
    }
    else
    {
        // Unknown callee or symbolic inputs: no world effect, opaque result.
        push(st, fresh_word(st, "call", TaintVec::smeared(std::move(in_flat))));
    }
}

/// Blocks from which `target` is reachable over static CFG edges.
std::vector<char> reverse_reachable(const Cfg& cfg, uint32_t target)
{
    std::vector<std::vector<uint32_t>> preds(cfg.blocks.size());
    for (const auto& e : cfg.edges)
        preds[e.to].push_back(e.from);
    std::vector<char> can(cfg.blocks.size(), 0);
    std::vector<uint32_t> queue{target};
    can[target] = 1;
    while (!queue.empty())
    {
        const auto b = queue.back();
        queue.pop_back();
        for (const auto p : preds[b])
            if (!can[p])
            {
                can[p] = 1;
                queue.push_back(p);
            }
    }
    return can;
}
}  // namespace

ConcolicResult concolic_run(const InstrumentedProgram& ip, const Address& contract,
    const SeedInput& seed, const WorldState& world, const ExploreConfig& config)
{
    ConcolicResult out;
    const auto view = ip.view();

    // Gate: the seed must execute successfully against the snapshot, or the
    // shadowed replay would chase a path the chain never took.
    {
        WorldState check = world;
        Tx tx;
        tx.from = seed.caller;
        tx.to = contract;
        tx.value = seed.value;
        tx.calldata = seed.calldata;
        ExecOptions opt;
        opt.root_code = &view;
        opt.record_trace = false;
        const auto res = execute_transaction(check, tx, opt);
        if (res.status != Status::Success)
        {
            out.skipped = true;
            out.skip_reason = res.status == Status::Revert ? "seed reverted"
                                                           : "seed faulted: " + res.fault;
            return out;
        }
    }

    SymMachine m(ip, view, contract, config, &seed);
    PathState st = m.initial_state(world);
    while (true)
    {
        if (st.steps > config.max_steps_per_path)
        {
            m.finalize_path(st, Status::Fault, false);
            out.halt_status = Status::Fault;
            break;
        }
        const auto o = m.step(st);
        if (o.kind == SymMachine::StepOut::Kind::Continue)
            continue;
        if (o.kind == SymMachine::StepOut::Kind::Halt)
        {
            m.finalize_path(st, o.status, true);
            out.halt_status = o.status;
            break;
        }
        // A fork or table cap cannot happen when every condition is concrete.
        m.finalize_path(st, Status::Fault, false);
        out.halt_status = Status::Fault;
        break;
    }
    out.sinks = std::move(st.sinks);
    return out;
}

ExploreResult symbolic_explore(const InstrumentedProgram& ip, const Address& contract,
    uint32_t entry_pc, uint32_t target_call_pc, const WorldState& world,
    const ExploreConfig& config)
{
    ExploreResult out;
    const auto view = ip.view();
    const auto cfg = build_cfg(view);

    const auto target_block = cfg.block_at_pc(view, target_call_pc);
    if (!target_block)
        return out;
    const auto reach = reverse_reachable(cfg, *target_block);

    SymMachine m(ip, view, contract, config, nullptr);
    const Assignment env = m.env_assignment();

    std::vector<PathState> work;
    {
        PathState init = m.initial_state(world);
        const auto entry_idx = view.index_of(entry_pc);
        if (!entry_idx)
            return out;
        init.idx = *entry_idx;
        if (!reach[cfg.block_of_index[init.idx]])
            return out;
        work.push_back(std::move(init));
    }

    const auto deadline = std::chrono::steady_clock::now() +
        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(config.time_budget_seconds));

    const auto admit = [&](PathState&& p) {
        if (Solver::definitely_unsat(p.constraints, {}, env))
        {
            ++out.stats.pruned_unsat;
            return;
        }
        if (!reach[cfg.block_of_index[p.idx]])
        {
            ++out.stats.pruned_cfg;
            return;
        }
        work.push_back(std::move(p));
    };

    const auto harvest = [&](PathState& st) {
        for (auto& s : st.sinks)
            if (s.site.call_pc == target_call_pc)
                out.sinks.push_back(std::move(s));
    };

    while (!work.empty())
    {
        if (out.stats.paths_explored >= config.path_cap)
        {
            out.incomplete = true;
            break;
        }
        if (std::chrono::steady_clock::now() >= deadline)
        {
            out.incomplete = true;
            break;
        }
        PathState st = std::move(work.back());
        work.pop_back();
        ++out.stats.paths_explored;

        bool running = true;
        while (running)
        {
            if (st.steps > config.max_steps_per_path)
            {
                m.finalize_path(st, Status::Fault, false);
                harvest(st);
                out.incomplete = true;
                break;
            }
            if ((++out.stats.steps & 0xfff) == 0 && std::chrono::steady_clock::now() >= deadline)
            {
                m.finalize_path(st, Status::Fault, false);
                harvest(st);
                out.incomplete = true;
                running = false;
                break;
            }
            const auto o = m.step(st);
            switch (o.kind)
            {
            case SymMachine::StepOut::Kind::Continue:
                continue;
            case SymMachine::StepOut::Kind::Halt:
                m.finalize_path(st, o.status, true);
                harvest(st);
                running = false;
                break;
            case SymMachine::StepOut::Kind::TableCap:
                ++out.stats.pruned_table_cap;
                m.finalize_path(st, Status::Fault, false);
                harvest(st);
                running = false;
                break;
            case SymMachine::StepOut::Kind::Fork:
            {
                PathState fall = st;
                fall.idx = o.fall_idx;
                fall.constraints.push_back(make_op(SymOp::Iszero, {o.cond}));
                PathState taken = std::move(st);
                taken.constraints.push_back(o.cond);
                admit(std::move(fall));
                if (!o.taken_valid)
                {
                    // The taken side exists but faults immediately.
                    if (!Solver::definitely_unsat(taken.constraints, {}, env))
                    {
                        ++out.stats.paths_explored;
                        m.finalize_path(taken, Status::Fault, true);
                        harvest(taken);
                    }
                    else
                    {
                        ++out.stats.pruned_unsat;
                    }
                }
                else
                {
                    taken.idx = o.taken_idx;
                    if (o.taken_enters_table &&
                        ++taken.table_visits > config.table_visit_cap)
                    {
                        ++out.stats.pruned_table_cap;
                    }
                    else
                    {
                        admit(std::move(taken));
                    }
                }
                running = false;
                break;
            }
            }
        }
    }
    if (!work.empty())
        out.incomplete = true;
    return out;
}
}  // namespace skanf
