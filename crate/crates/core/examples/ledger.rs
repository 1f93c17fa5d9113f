//! Order validated actions by consensual timestamp and replay them.

use r2c::consensus::{global_validate, order_actions, Action, CommitMessage, Ledger};

fn main() -> r2c::Result<()> {
    let mut ledger = Ledger::default();
    ledger.append(Action::new("open", b"valve 3 open".to_vec(), 4), 10.0);

    // Commits as (validity, local timestamp) from five validators.
    let rounds = [
        (Action::new("close", b"valve 3 close".to_vec(), 2).after("open"), [(true, 31), (true, 29), (true, 33), (false, 30), (true, 32)]),
        (Action::new("pump", b"pump 1 on".to_vec(), 7), [(true, 22), (true, 25), (true, 21), (true, 24), (true, 23)]),
        (Action::new("open", b"valve 3 shut".to_vec(), 9), [(true, 27), (false, 28), (true, 26), (true, 27), (true, 29)]),
        (Action::new("drain", b"drain".to_vec(), 1).after("tank"), [(true, 40), (true, 41), (true, 39), (true, 42), (true, 40)]),
    ];

    let mut outcomes = Vec::new();
    for (action, votes) in rounds {
        let commits: Vec<_> = votes.iter().enumerate().map(|(i, &(v, t))| CommitMessage::new(i + 1, v, t)).collect();
        let o = global_validate(&commits, 4)?;
        println!("{:<6} valid {} at {:.1}", action.id.0, o.globally_valid, o.consensual_timestamp);
        outcomes.push((action, o));
    }

    let ordered = order_actions(&ledger, &outcomes);
    println!("ledger:");
    for e in ordered.entries() {
        println!("  {:>5.1} {:<6} {:?}", e.consensual_timestamp, e.action.id.0, e.status);
    }
    Ok(())
}
