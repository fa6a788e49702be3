import { figureMain, reportFailure } from "../cli.js";

figureMain("entropy", process.argv.slice(2)).catch(reportFailure);
