import { figureMain, reportFailure } from "../cli.js";

figureMain("bloch", process.argv.slice(2)).catch(reportFailure);
