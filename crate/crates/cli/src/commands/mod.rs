mod algebra;
mod dynamics;
mod qmc;

use crate::args::{Cli, Command, SchemeCommand};
use crate::error::CliResult;
use crate::output::Report;

pub fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Bch(a) => algebra::bch(a),
        Command::Scheme(SchemeCommand::List) => algebra::scheme_list(),
        Command::Scheme(SchemeCommand::Show(a)) => algebra::scheme_show(a),
        Command::Scheme(SchemeCommand::Flatten(a)) => algebra::scheme_flatten(a),
        Command::Scheme(SchemeCommand::Check(a)) => algebra::scheme_check(a),
        Command::Solve(a) => algebra::solve_cmd(a),
        Command::Family(a) => algebra::family(a),
        Command::Converge(a) => dynamics::converge(a, cli.seed),
        Command::Precession(a) => dynamics::precession(a),
        Command::Umeno(a) => dynamics::umeno(a),
        Command::Timedep(a) => dynamics::timedep(a),
        Command::Qmc(a) => qmc::qmc(a, cli.seed),
        Command::Anneal(a) => qmc::anneal_cmd(a, cli.seed),
        Command::Extrapolate(a) => qmc::extrapolate(a, cli.seed),
    }
}
