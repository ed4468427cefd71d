// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/interpreter.hpp>
#include <skanf/keccak.hpp>

#include <sstream>

namespace skanf
{
namespace
{
constexpr int64_t intrinsic_gas = 21'000;

struct Collector
{
    ExecResult* result = nullptr;
    bool record_trace = true;
    int max_depth = 64;
};

struct FrameOutcome
{
    Status status = Status::Fault;
    std::string fault;
    bytes return_data;
    std::vector<EventLog> logs;
    std::vector<InternalCall> calls;
    int64_t gas_left = 0;
};

FrameOutcome fault_out(std::string reason, int64_t gas_left = 0)
{
    FrameOutcome out;
    out.status = Status::Fault;
    out.fault = std::move(reason);
    out.gas_left = gas_left;
    return out;
}

Word calldata_word(const bytes& data, uint64_t offset)
{
    Word w = 0;
    for (unsigned i = 0; i < 32; ++i)
    {
        const uint64_t pos = offset + i;
        const uint8_t b = pos < data.size() ? data[pos] : 0;
        w = (w << 8) | b;
    }
    return w;
}

/// ERC-20 native handler. Strict ABI: short calldata reverts. Under a static
/// context only balanceOf is allowed.
FrameOutcome run_token_handler(WorldState& world, const Address& self, const Address& caller,
    const bytes& calldata, bool is_static, int64_t gas)
{
    auto& token = *world.accounts.at(self).token;
    FrameOutcome out;
    out.gas_left = gas;

    const auto revert = [&]() {
        out.status = Status::Revert;
        return out;
    };
    const auto return_word = [&](const Word& w) {
        const auto raw = word_to_bytes(w);
        out.return_data.assign(raw.begin(), raw.end());
        out.status = Status::Success;
        return out;
    };
    const auto arg = [&](unsigned i) { return calldata_word(calldata, 4 + 32 * uint64_t{i}); };
    const auto has_args = [&](unsigned n) { return calldata.size() >= 4 + 32 * size_t{n}; };
    const auto log3 = [&](const Word& topic0, const Address& a, const Address& b, const Word& v) {
        const auto raw = word_to_bytes(v);
        out.logs.push_back(
            {self, {topic0, a.to_word(), b.to_word()}, bytes{raw.begin(), raw.end()}});
    };

    if (calldata.size() < 4)
        return revert();
    const uint32_t selector = static_cast<uint32_t>(calldata[0]) << 24 |
                              static_cast<uint32_t>(calldata[1]) << 16 |
                              static_cast<uint32_t>(calldata[2]) << 8 | calldata[3];

    if (is_static && selector != selectors::balance_of)
        return fault_out("static violation", 0);

    switch (selector)
    {
    case selectors::transfer:
    {
        if (!has_args(2))
            return revert();
        const auto to = Address::from_word(arg(0));
        const auto amount = arg(1);
        auto& from_balance = token.balances[caller];
        if (from_balance < amount)
            return revert();
        from_balance -= amount;
        token.balances[to] += amount;
        log3(transfer_event_topic(), caller, to, amount);
        return return_word(1);
    }
    case selectors::approve:
    {
        if (!has_args(2))
            return revert();
        const auto spender = Address::from_word(arg(0));
        const auto amount = arg(1);
        token.allowances[{caller, spender}] = amount;
        log3(approval_event_topic(), caller, spender, amount);
        return return_word(1);
    }
    case selectors::transfer_from:
    {
        if (!has_args(3))
            return revert();
        const auto from = Address::from_word(arg(0));
        const auto to = Address::from_word(arg(1));
        const auto amount = arg(2);
        auto& allowance = token.allowances[{from, caller}];
        auto& from_balance = token.balances[from];
        if (allowance < amount || from_balance < amount)
            return revert();
        allowance -= amount;
        from_balance -= amount;
        token.balances[to] += amount;
        log3(transfer_event_topic(), from, to, amount);
        return return_word(1);
    }
    case selectors::balance_of:
    {
        if (!has_args(1))
            return revert();
        return return_word(token.balances[Address::from_word(arg(0))]);
    }
    default:
        return revert();
    }
}

FrameOutcome call_account(WorldState& world, Collector& col, const Address& caller,
    const Address& origin, const Address& callee, const Word& value, const bytes& calldata,
    bool is_static, int depth, int64_t gas, const CodeView* code_override);

/// One bytecode call frame.
class Frame
{
public:
    Frame(WorldState& world, Collector& col, const CodeView& code, Address self, Address caller,
        Address origin, Word value, const bytes& calldata, bool is_static, int depth, int64_t gas)
      : world_{world}, col_{col}, code_{code}, self_{self}, caller_{caller}, origin_{origin},
        value_{value}, calldata_{calldata}, is_static_{is_static}, depth_{depth}, gas_{gas}
    {}

    FrameOutcome run();

private:
    WorldState& world_;
    Collector& col_;
    const CodeView& code_;
    Address self_;
    Address caller_;
    Address origin_;
    Word value_;
    const bytes& calldata_;
    bool is_static_;
    int depth_;
    int64_t gas_;

    std::vector<Word> stack_;
    bytes memory_;
    size_t ip_ = 0;
    FrameOutcome out_;

    enum class StepResult
    {
        Continue,
        Halt,
    };

    [[noreturn]] void fault(std::string reason)
    {
        throw FrameFault{std::move(reason)};
    }

    struct FrameFault
    {
        std::string reason;
    };

    Word pop()
    {
        if (stack_.empty())
            fault("stack underflow");
        Word w = std::move(stack_.back());
        stack_.pop_back();
        return w;
    }

    void push(Word w)
    {
        if (stack_.size() >= 1024)
            fault("stack overflow");
        stack_.push_back(std::move(w));
    }

    void charge(int64_t amount)
    {
        gas_ -= amount;
        if (gas_ < 0)
            fault("out of gas");
    }

    /// Expands memory to cover [offset, offset+len), charging quadratic gas.
    void touch_memory(const Word& offset, const Word& len)
    {
        if (len == 0)
            return;
        if (offset > 0xffffffffu || len > 0xffffffffu)
            fault("memory overflow");
        const uint64_t end = static_cast<uint64_t>(offset) + static_cast<uint64_t>(len);
        const uint64_t new_words = (end + 31) / 32;
        const uint64_t old_words = (memory_.size() + 31) / 32;
        if (new_words <= old_words)
            return;
        const auto cost = [](uint64_t w) {
            return static_cast<int64_t>(3 * w + w * w / 512);
        };
        charge(cost(new_words) - cost(old_words));
        memory_.resize(new_words * 32, 0);
    }

    bytes mem_slice(const Word& offset, const Word& len)
    {
        touch_memory(offset, len);
        if (len == 0)
            return {};
        const auto off = static_cast<size_t>(offset);
        const auto n = static_cast<size_t>(len);
        return {memory_.begin() + off, memory_.begin() + off + n};
    }

    void jump_to(const Word& dest)
    {
        if (dest > 0xffffffffu)
            fault("invalid jump");
        const auto pc = static_cast<uint32_t>(dest);
        if (!code_.jumpdests.contains(pc))
            fault("invalid jump");
        const auto idx = code_.index_of(pc);
        if (!idx)
            fault("invalid jump");
        ip_ = *idx;
    }

    StepResult step(const Instruction& instr);
    void do_call(const Instruction& instr);
};

FrameOutcome Frame::run()
{
    out_.gas_left = gas_;
    try
    {
        while (true)
        {
            if (ip_ >= code_.stream.size())
            {
                // Walking off the end of code halts like STOP.
                out_.status = Status::Success;
                break;
            }
            const auto& instr = code_.stream[ip_];
            if (col_.record_trace && instr.pc)
                col_.result->trace.push_back(
                    {*instr.pc, instr.opcode, depth_, static_cast<uint32_t>(stack_.size())});
            charge(base_gas_cost(instr.opcode));
            if (step(instr) == StepResult::Halt)
                break;
        }
        out_.gas_left = gas_;
    }
    catch (const FrameFault& f)
    {
        out_ = fault_out(f.reason, 0);  // a faulting frame consumes its gas
    }
    return out_;
}

Frame::StepResult Frame::step(const Instruction& instr)
{
    const auto& info = instr.info();
    if (!info.defined)
        fault("invalid opcode");

    const uint8_t opcode = instr.opcode;
    if (is_push(opcode))
    {
        push(instr.push_value());
        ++ip_;
        return StepResult::Continue;
    }
    if (is_dup(opcode))
    {
        const unsigned n = opcode - static_cast<uint8_t>(Op::DUP1) + 1;
        if (stack_.size() < n)
            fault("stack underflow");
        push(stack_[stack_.size() - n]);
        ++ip_;
        return StepResult::Continue;
    }
    if (is_swap(opcode))
    {
        const unsigned n = opcode - static_cast<uint8_t>(Op::SWAP1) + 1;
        if (stack_.size() < n + 1)
            fault("stack underflow");
        std::swap(stack_[stack_.size() - 1], stack_[stack_.size() - 1 - n]);
        ++ip_;
        return StepResult::Continue;
    }
    if (is_log(opcode))
    {
        if (is_static_)
            fault("static violation");
        const unsigned topics = opcode - static_cast<uint8_t>(Op::LOG0);
        const auto offset = pop();
        const auto len = pop();
        EventLog log;
        log.emitter = self_;
        for (unsigned i = 0; i < topics; ++i)
            log.topics.push_back(pop());
        if (len > 0xffffffffu)
            fault("memory overflow");
        charge(8 * static_cast<int64_t>(len));
        log.data = mem_slice(offset, len);
        out_.logs.push_back(std::move(log));
        ++ip_;
        return StepResult::Continue;
    }

    using namespace word_ops;
    const auto binop = [&](Word (*f)(const Word&, const Word&)) {
        auto a = pop();
        auto b = pop();
        push(f(a, b));
        ++ip_;
        return StepResult::Continue;
    };

    switch (instr.op())
    {
    case Op::STOP:
        out_.status = Status::Success;
        return StepResult::Halt;
    case Op::ADD:
        return binop(add);
    case Op::MUL:
        return binop(mul);
    case Op::SUB:
        return binop(sub);
    case Op::DIV:
        return binop(div);
    case Op::SDIV:
        return binop(sdiv);
    case Op::MOD:
        return binop(mod);
    case Op::SMOD:
        return binop(smod);
    case Op::ADDMOD:
    {
        const auto a = pop();
        const auto b = pop();
        const auto n = pop();
        push(addmod(a, b, n));
        ++ip_;
        return StepResult::Continue;
    }
    case Op::MULMOD:
    {
        const auto a = pop();
        const auto b = pop();
        const auto n = pop();
        push(mulmod(a, b, n));
        ++ip_;
        return StepResult::Continue;
    }
    case Op::EXP:
    {
        const auto base = pop();
        const auto exponent = pop();
        unsigned ebytes = 0;
        for (Word e = exponent; e != 0; e >>= 8)
            ++ebytes;
        charge(50 * int64_t{ebytes});
        push(exp(base, exponent));
        ++ip_;
        return StepResult::Continue;
    }
    case Op::SIGNEXTEND:
        return binop(signextend);
    case Op::LT:
        return binop(lt);
    case Op::GT:
        return binop(gt);
    case Op::SLT:
        return binop(slt);
    case Op::SGT:
        return binop(sgt);
    case Op::EQ:
        return binop(eq);
    case Op::ISZERO:
        push(iszero(pop()));
        ++ip_;
        return StepResult::Continue;
    case Op::AND:
        return binop(and_);
    case Op::OR:
        return binop(or_);
    case Op::XOR:
        return binop(xor_);
    case Op::NOT:
        push(not_(pop()));
        ++ip_;
        return StepResult::Continue;
    case Op::BYTE:
        return binop(byte);
    case Op::SHL:
        return binop(shl);
    case Op::SHR:
        return binop(shr);
    case Op::SAR:
        return binop(sar);
    case Op::KECCAK256:
    {
        const auto offset = pop();
        const auto len = pop();
        if (len > 0xffffffffu)
            fault("memory overflow");
        charge(6 * ((static_cast<int64_t>(len) + 31) / 32));
        push(keccak256_word(mem_slice(offset, len)));
        ++ip_;
        return StepResult::Continue;
    }
    case Op::ADDRESS:
        push(self_.to_word());
        ++ip_;
        return StepResult::Continue;
    case Op::BALANCE:
    {
        const auto a = Address::from_word(pop());
        const auto* account = world_.find(a);
        push(account ? account->balance : Word{0});
        ++ip_;
        return StepResult::Continue;
    }
    case Op::ORIGIN:
        push(origin_.to_word());
        ++ip_;
        return StepResult::Continue;
    case Op::CALLER:
        push(caller_.to_word());
        ++ip_;
        return StepResult::Continue;
    case Op::CALLVALUE:
        push(value_);
        ++ip_;
        return StepResult::Continue;
    case Op::CALLDATALOAD:
    {
        const auto offset = pop();
        if (offset > 0xffffffffu)
        {
            push(0);
        }
        else
        {
            push(calldata_word(calldata_, static_cast<uint64_t>(offset)));
        }
        ++ip_;
        return StepResult::Continue;
    }
    case Op::CALLDATASIZE:
        push(calldata_.size());
        ++ip_;
        return StepResult::Continue;
    case Op::CALLDATACOPY:
    {
        const auto dest = pop();
        const auto src = pop();
        const auto len = pop();
        if (len > 0xffffffffu)
            fault("memory overflow");
        charge(3 * ((static_cast<int64_t>(len) + 31) / 32));
        touch_memory(dest, len);
        for (uint64_t i = 0; i < len; ++i)
        {
            const uint64_t s = (src > 0xffffffffu) ? ~uint64_t{0} : static_cast<uint64_t>(src) + i;
            memory_[static_cast<size_t>(dest) + i] = s < calldata_.size() ? calldata_[s] : 0;
        }
        ++ip_;
        return StepResult::Continue;
    }
    case Op::COINBASE:
        push(world_.block.coinbase.to_word());
        ++ip_;
        return StepResult::Continue;
    case Op::TIMESTAMP:
        push(world_.block.timestamp);
        ++ip_;
        return StepResult::Continue;
    case Op::NUMBER:
        push(world_.block.number);
        ++ip_;
        return StepResult::Continue;
    case Op::CHAINID:
        push(world_.block.chain_id);
        ++ip_;
        return StepResult::Continue;
    case Op::POP:
        pop();
        ++ip_;
        return StepResult::Continue;
    case Op::MLOAD:
    {
        const auto offset = pop();
        touch_memory(offset, 32);
        push(word_from_bytes(
            bytes_view{memory_.data() + static_cast<size_t>(offset), 32}));
        ++ip_;
        return StepResult::Continue;
    }
    case Op::MSTORE:
    {
        const auto offset = pop();
        const auto value = pop();
        touch_memory(offset, 32);
        const auto raw = word_to_bytes(value);
        std::copy(raw.begin(), raw.end(), memory_.begin() + static_cast<size_t>(offset));
        ++ip_;
        return StepResult::Continue;
    }
    case Op::MSTORE8:
    {
        const auto offset = pop();
        const auto value = pop();
        touch_memory(offset, 1);
        memory_[static_cast<size_t>(offset)] = static_cast<uint8_t>(value & 0xff);
        ++ip_;
        return StepResult::Continue;
    }
    case Op::SLOAD:
    {
        const auto key = pop();
        const auto& storage = world_.get_or_create(self_).storage;
        const auto it = storage.find(key);
        push(it == storage.end() ? Word{0} : it->second);
        ++ip_;
        return StepResult::Continue;
    }
    case Op::SSTORE:
    {
        if (is_static_)
            fault("static violation");
        const auto key = pop();
        const auto value = pop();
        auto& storage = world_.get_or_create(self_).storage;
        if (value == 0)
            storage.erase(key);
        else
            storage[key] = value;
        ++ip_;
        return StepResult::Continue;
    }
    case Op::JUMP:
        jump_to(pop());
        return StepResult::Continue;
    case Op::JUMPI:
    {
        const auto dest = pop();
        const auto cond = pop();
        if (cond != 0)
            jump_to(dest);
        else
            ++ip_;
        return StepResult::Continue;
    }
    case Op::PC:
        if (!instr.pc)
            fault("pc unavailable");
        push(*instr.pc);
        ++ip_;
        return StepResult::Continue;
    case Op::GAS:
        push(gas_);
        ++ip_;
        return StepResult::Continue;
    case Op::JUMPDEST:
        ++ip_;
        return StepResult::Continue;
    case Op::CALL:
    case Op::STATICCALL:
        do_call(instr);
        ++ip_;
        return StepResult::Continue;
    case Op::RETURN:
    {
        const auto offset = pop();
        const auto len = pop();
        out_.return_data = mem_slice(offset, len);
        out_.status = Status::Success;
        return StepResult::Halt;
    }
    case Op::REVERT:
    {
        const auto offset = pop();
        const auto len = pop();
        out_.return_data = mem_slice(offset, len);
        out_.status = Status::Revert;
        return StepResult::Halt;
    }
    case Op::SELFDESTRUCT:
        // Halts successfully without destroying state: the analyses only
        // need the control-flow effect.
        if (is_static_)
            fault("static violation");
        pop();
        out_.status = Status::Success;
        return StepResult::Halt;
    case Op::INVALID:
        fault("invalid opcode");
    default:
        fault(std::string{"unsupported: "} + std::string{info.name});
    }
}

void Frame::do_call(const Instruction& instr)
{
    const bool is_static_call = instr.op() == Op::STATICCALL;
    const auto gas_requested = pop();
    const auto target = Address::from_word(pop());
    const Word value = is_static_call ? Word{0} : pop();
    const auto in_off = pop();
    const auto in_len = pop();
    const auto out_off = pop();
    const auto out_len = pop();

    if (is_static_ && value > 0)
        fault("static violation");
    if (value > 0)
        charge(9000);

    touch_memory(out_off, out_len);
    bytes args = mem_slice(in_off, in_len);

    col_.result->observations.push_back({instr.pc.value_or(0xffffffffu), depth_, instr.opcode,
        target, value, args});

    // The caller retains 1/64 of its remaining gas, so a child that burns its
    // whole allowance cannot strand the parent mid-frame.
    const int64_t forwardable = gas_ - gas_ / 64;
    const int64_t child_gas =
        std::min<int64_t>(forwardable, static_cast<int64_t>(word_to_u64_clamp(gas_requested)));

    auto outcome = call_account(world_, col_, self_, origin_, target, value, args,
        is_static_ || is_static_call, depth_ + 1, child_gas, nullptr);

    gas_ -= child_gas - outcome.gas_left;
    if (gas_ < 0)
        gas_ = 0;

    if (outcome.status == Status::Success)
    {
        out_.calls.push_back({self_, target, value, std::move(args),
            static_cast<uint8_t>(instr.opcode)});
        for (auto& log : outcome.logs)
            out_.logs.push_back(std::move(log));
        for (auto& call : outcome.calls)
            out_.calls.push_back(std::move(call));
    }

    const size_t copy_len = std::min<size_t>(static_cast<size_t>(out_len),
        outcome.return_data.size());
    if (copy_len > 0)
        std::copy_n(outcome.return_data.begin(), copy_len,
            memory_.begin() + static_cast<size_t>(out_off));

    push(outcome.status == Status::Success ? 1 : 0);
}

FrameOutcome call_account(WorldState& world, Collector& col, const Address& caller,
    const Address& origin, const Address& callee, const Word& value, const bytes& calldata,
    bool is_static, int depth, int64_t gas, const CodeView* code_override)
{
    if (depth > col.max_depth)
        return fault_out("depth limit");

    world.snapshot();
    if (value > 0)
    {
        auto& from = world.get_or_create(caller);
        if (from.balance < value)
        {
            world.rollback();
            return fault_out("insufficient balance", gas);
        }
        from.balance -= value;
        world.get_or_create(callee).balance += value;
    }

    FrameOutcome outcome;
    static const auto identity_precompile =
        Address::from_hex("0x0000000000000000000000000000000000000004");
    const auto* account = world.find(callee);

    if (code_override != nullptr)
    {
        Frame frame{world, col, *code_override, callee, caller, origin, value, calldata,
            is_static, depth, gas};
        outcome = frame.run();
    }
    else if (callee == identity_precompile)
    {
        outcome.status = Status::Success;
        outcome.return_data = calldata;
        outcome.gas_left = gas;
    }
    else if (account != nullptr && account->token)
    {
        outcome = run_token_handler(world, callee, caller, calldata, is_static, gas);
    }
    else if (account != nullptr && !account->code.empty())
    {
        const auto program = disassemble(account->code);
        const auto view = CodeView::of(program);
        Frame frame{world, col, view, callee, caller, origin, value, calldata, is_static, depth,
            gas};
        outcome = frame.run();
    }
    else
    {
        outcome.status = Status::Success;
        outcome.gas_left = gas;
    }

    if (outcome.status == Status::Success)
    {
        world.commit();
    }
    else
    {
        world.rollback();
        outcome.logs.clear();
        outcome.calls.clear();
    }
    return outcome;
}
}  // namespace

ExecResult execute_transaction(WorldState& world, const Tx& tx, const ExecOptions& options)
{
    ExecResult result;
    Collector col{&result, options.record_trace, options.max_depth};

    if (tx.gas < intrinsic_gas)
    {
        result.status = Status::Fault;
        result.fault = "out of gas";
        result.gas_used = tx.gas;
        return result;
    }

    auto outcome = call_account(world, col, tx.from, tx.from, tx.to, tx.value, tx.calldata,
        false, 0, tx.gas - intrinsic_gas, options.root_code);

    result.status = outcome.status;
    result.fault = std::move(outcome.fault);
    result.return_data = std::move(outcome.return_data);
    result.logs = std::move(outcome.logs);
    result.gas_used = tx.gas - outcome.gas_left;
    result.calls.push_back({tx.from, tx.to, tx.value, tx.calldata, 0});
    for (auto& call : outcome.calls)
        result.calls.push_back(std::move(call));

    if (result.status != Status::Fault)
        world.get_or_create(tx.from).nonce += 1;
    return result;
}

ExecResult call_message(WorldState& world, const Address& caller, const Address& origin,
    const Address& callee, const Word& value, const bytes& calldata, bool is_static, int64_t gas,
    int depth, const ExecOptions& options)
{
    ExecResult result;
    Collector col{&result, options.record_trace, options.max_depth};
    auto outcome = call_account(
        world, col, caller, origin, callee, value, calldata, is_static, depth, gas, nullptr);

    result.status = outcome.status;
    result.fault = std::move(outcome.fault);
    result.return_data = std::move(outcome.return_data);
    result.logs = std::move(outcome.logs);
    result.gas_used = gas - outcome.gas_left;
    result.calls = std::move(outcome.calls);
    return result;
}

bool reached_pc(const ExecResult& result, uint32_t pc)
{
    for (const auto& entry : result.trace)
        if (entry.pc == pc)
            return true;
    return false;
}

std::string dump_trace(const ExecResult& result)
{
    std::ostringstream os;
    for (const auto& entry : result.trace)
        os << entry.pc << " " << op_info(entry.opcode).name << "\n";
    return os.str();
}

int64_t base_gas_cost(uint8_t opcode)
{
    switch (static_cast<Op>(opcode))
    {
    case Op::STOP:
    case Op::RETURN:
    case Op::REVERT:
        return 0;
    case Op::JUMPDEST:
        return 1;
    case Op::SSTORE:
        return 5000;
    case Op::SLOAD:
        return 200;
    case Op::BALANCE:
        return 400;
    case Op::CALL:
    case Op::STATICCALL:
        return 700;
    case Op::KECCAK256:
        return 30;
    case Op::EXP:
        return 10;
    case Op::LOG0:
    case Op::LOG1:
    case Op::LOG2:
    case Op::LOG3:
    case Op::LOG4:
        return 375 * (1 + opcode - static_cast<uint8_t>(Op::LOG0));
    case Op::SELFDESTRUCT:
        return 5000;
    default:
        return 3;
    }
}
}  // namespace skanf
