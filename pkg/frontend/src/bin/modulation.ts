import { figureMain, reportFailure } from "../cli.js";

figureMain("modulation", process.argv.slice(2)).catch(reportFailure);
