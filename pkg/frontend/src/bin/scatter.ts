import { figureMain, reportFailure } from "../cli.js";

figureMain("scatter", process.argv.slice(2)).catch(reportFailure);
