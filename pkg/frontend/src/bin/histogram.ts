import { figureMain, reportFailure } from "../cli.js";

figureMain("histogram", process.argv.slice(2)).catch(reportFailure);
