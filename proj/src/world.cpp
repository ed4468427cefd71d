// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/keccak.hpp>
#include <skanf/world.hpp>

#include <stdexcept>

namespace skanf
{
namespace
{
Word topic_of(std::string_view signature)
{
    return keccak256_word(bytes{signature.begin(), signature.end()});
}
}  // namespace

Word transfer_event_topic()
{
    static const Word topic = topic_of("Transfer(address,address,uint256)");
    return topic;
}

Word approval_event_topic()
{
    static const Word topic = topic_of("Approval(address,address,uint256)");
    return topic;
}

void WorldState::register_mock_erc20(const Address& a, std::string name,
    std::map<Address, Word> balances)
{
    auto& account = accounts[a];
    if (!account.code.empty())
        throw std::invalid_argument{"account already holds bytecode: " + a.hex()};
    if (account.token)
        throw std::invalid_argument{"account already is a token: " + a.hex()};
    account.token = MockToken{std::move(name), std::move(balances), {}};
}

Word WorldState::token_balance(const Address& token, const Address& holder) const
{
    const auto* account = find(token);
    if (!account || !account->token)
        return 0;
    const auto it = account->token->balances.find(holder);
    return it == account->token->balances.end() ? Word{0} : it->second;
}

void WorldState::snapshot()
{
    snapshots_.emplace_back(accounts, block);
}

void WorldState::rollback()
{
    if (snapshots_.empty())
        throw std::logic_error{"rollback without snapshot"};
    accounts = std::move(snapshots_.back().first);
    block = snapshots_.back().second;
    snapshots_.pop_back();
}

void WorldState::commit()
{
    if (snapshots_.empty())
        throw std::logic_error{"commit without snapshot"};
    snapshots_.pop_back();
}
}  // namespace skanf
